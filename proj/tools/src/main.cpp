#include <iostream>

#include "nhcurv_app/cli.hpp"

int main(int argc, char** argv) {
  return nhcurv::app::run_cli(argc, argv, std::cout, std::cerr);
}
