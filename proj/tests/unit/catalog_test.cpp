#include <gtest/gtest.h>

#include <string>

#include "nhcurv/catalog.hpp"
#include "nhcurv/errors.hpp"

namespace nhcurv {
namespace {

const std::string kGood = R"(
[chart]
x y z
[params]
a = 1 in [0.5, 2]
[metric]
1 1 = 1
2 2 = a
3 3 = 1
[frame]
1 = 1, 0, -y/2
2 = 0, 1, x/2
3 = y/(2*a), -x/2, 1
[levels]
2 3
[sample]
x in [-1, 1]
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
  text.replace(text.find(from), from.size(), to);
  return text;
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_system(text, "test.sys");
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::numerical;
}

TEST(Catalog, Builtins) {
  const auto disc = load_system("disc");
  EXPECT_EQ(disc.dim(), 5u);
  EXPECT_EQ(disc.levels, (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(disc.params.size(), 3u);
  const auto ball = load_system("ball-sphere");
  EXPECT_EQ(ball.dim(), 5u);
  EXPECT_EQ(ball.levels, (std::vector<std::size_t>{3, 5}));
  ASSERT_EQ(ball.params.size(), 2u);
  EXPECT_EQ(ball.params[0].name, "A");
  EXPECT_EQ(ball.params[1].name, "k");
  const auto h = load_system("heisenberg");
  EXPECT_EQ(h.dim(), 3u);
  EXPECT_EQ(h.levels, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(builtin_ids().size(), 3u);
}

TEST(Catalog, ParsesGoodFile) {
  const auto sys = parse_system(kGood, "test.sys");
  EXPECT_EQ(sys.chart, (std::vector<std::string>{"x", "y", "z"}));
  EXPECT_EQ(sys.param_values(), (std::vector<double>{1.0}));
  EXPECT_EQ(sys.rank(), 2u);
}

TEST(Catalog, UnknownSystem) {
  try {
    load_system("no-such-system");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::usage);
  }
}

TEST(Catalog, SyntaxErrorsAreParseErrors) {
  EXPECT_EQ(kind_of(replace(kGood, "[chart]", "[chrt]")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "[levels]\n2 3\n", "")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "2 2 = a", "2 2 = a +")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "2 2 = a", "2 2 = b")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "3 3 = 1", "3 3 = 1\n3 3 = 2")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "3 3 = 1", "4 4 = 1")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "1 = 1, 0, -y/2", "1 = 1, 0")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "x in [-1, 1]", "w in [-1, 1]")), ErrorKind::parse);
  EXPECT_EQ(kind_of(replace(kGood, "x in [-1, 1]", "x in [1, -1]")), ErrorKind::parse);
  EXPECT_EQ(kind_of("x y\n" + kGood), ErrorKind::parse);
}

TEST(Catalog, ParseErrorNamesLine) {
  try {
    parse_system(replace(kGood, "2 2 = a", "2 2 = a +"), "test.sys");
    FAIL();
  } catch (const FileParseError& e) {
    EXPECT_EQ(e.line(), 8u);
    EXPECT_NE(std::string(e.what()).find("test.sys:8"), std::string::npos);
  }
}

TEST(Catalog, StructuralErrorsAreValidationErrors) {
  EXPECT_EQ(kind_of(replace(kGood, "2 3\n", "3 2\n")), ErrorKind::validation);
  EXPECT_EQ(kind_of(replace(kGood, "2 3\n", "2 2\n")), ErrorKind::validation);
  EXPECT_EQ(kind_of(replace(kGood, "2 3\n", "2 4\n")), ErrorKind::parse);
}

TEST(Catalog, ParameterOverride) {
  const auto sys = load_system("disc").with_param("R", 2.5);
  EXPECT_EQ(sys.param_values()[*sys.param_index("R")], 2.5);
  EXPECT_THROW(sys.with_param("nope", 1.0), Error);
}

}  // namespace
}  // namespace nhcurv
