#include "nhcurv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "nhcurv/errors.hpp"

namespace nhcurv {
namespace {

std::uint64_t encode(std::span<const std::uint8_t> alpha, std::uint64_t base) {
  std::uint64_t key = 0;
  std::uint64_t scale = 1;
  for (auto a : alpha) {
    key += a * scale;
    scale *= base;
  }
  return key;
}

// All multi-indices of total degree `degree`, first exponent descending.
void enumerate_degree(std::size_t vars, int degree, std::size_t pos,
                      std::vector<std::uint8_t>& current,
                      std::vector<std::uint8_t>& out) {
  if (pos + 1 == vars) {
    current[pos] = static_cast<std::uint8_t>(degree);
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int a = degree; a >= 0; --a) {
    current[pos] = static_cast<std::uint8_t>(a);
    enumerate_degree(vars, degree - a, pos + 1, current, out);
  }
}

std::mutex& layout_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::size_t, int>, std::unique_ptr<JetLayout>>&
layout_cache() {
  static std::map<std::pair<std::size_t, int>, std::unique_ptr<JetLayout>> c;
  return c;
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// JetLayout

JetLayout::JetLayout(std::size_t vars, int order, const JetLayout* lower)
    : vars_(vars), order_(order), lower_(lower) {
  if (vars == 0) throw NumericalError("jet needs at least one variable");
  if (order < 0 || order > 250) throw NumericalError("jet order out of range");

  std::vector<std::uint8_t> current(vars, 0);
  for (int k = 0; k <= order; ++k) {
    const auto before = exponents_.size();
    enumerate_degree(vars, k, 0, current, exponents_);
    const auto added = (exponents_.size() - before) / vars;
    degrees_.insert(degrees_.end(), added, k);
  }

  const std::uint64_t base = static_cast<std::uint64_t>(order) + 1;
  std::unordered_map<std::uint64_t, std::uint32_t> slot_of;
  std::vector<std::uint64_t> key(size());
  for (std::size_t k = 0; k < size(); ++k) {
    key[k] = encode(exponents(k), base);
    slot_of.emplace(key[k], static_cast<std::uint32_t>(k));
  }

  std::vector<std::uint32_t> perm(size());
  for (std::size_t k = 0; k < size(); ++k) perm[k] = static_cast<std::uint32_t>(k);
  std::sort(perm.begin(), perm.end(),
            [&](auto a, auto b) { return key[a] < key[b]; });
  for (auto p : perm) {
    keys_.push_back(key[p]);
    key_slots_.push_back(p);
  }

  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (degrees_[i] + degrees_[j] > order) continue;
      products_.push_back({static_cast<std::uint32_t>(i),
                           static_cast<std::uint32_t>(j),
                           slot_of.at(key[i] + key[j])});
    }
  }

  if (lower_ != nullptr) {
    derivatives_.resize(vars);
    std::vector<std::uint8_t> shifted(vars);
    for (std::size_t v = 0; v < vars; ++v) {
      derivatives_[v].reserve(lower_->size());
      for (std::size_t k = 0; k < lower_->size(); ++k) {
        auto beta = lower_->exponents(k);
        std::copy(beta.begin(), beta.end(), shifted.begin());
        shifted[v] += 1;
        derivatives_[v].push_back({slot_of.at(encode(shifted, base)),
                                   static_cast<double>(beta[v] + 1)});
      }
    }
  }
}

const JetLayout& JetLayout::get(std::size_t vars, int order) {
  std::lock_guard lock(layout_mutex());
  auto& cache = layout_cache();
  const JetLayout* lower = nullptr;
  for (int d = 0; d <= order; ++d) {
    auto& slot = cache[{vars, d}];
    if (!slot) slot.reset(new JetLayout(vars, d, lower));
    lower = slot.get();
  }
  return *lower;
}

const JetLayout& JetLayout::truncated(int order) const {
  const JetLayout* l = this;
  while (l->order_ > order) {
    if (l->lower_ == nullptr) throw NumericalError("negative jet order");
    l = l->lower_;
  }
  return *l;
}

std::size_t JetLayout::index_of(std::span<const int> alpha) const {
  if (alpha.size() != vars_) {
    throw NumericalError("multi-index has " + std::to_string(alpha.size()) +
                         " entries, jet has " + std::to_string(vars_) +
                         " variables");
  }
  int total = 0;
  std::uint64_t key = 0;
  std::uint64_t scale = 1;
  const std::uint64_t base = static_cast<std::uint64_t>(order_) + 1;
  for (int a : alpha) {
    if (a < 0) throw NumericalError("negative multi-index entry");
    total += a;
    if (total > order_) {
      throw NumericalError("derivative order exceeds jet order " +
                           std::to_string(order_));
    }
    key += static_cast<std::uint64_t>(a) * scale;
    scale *= base;
  }
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  return key_slots_[static_cast<std::size_t>(it - keys_.begin())];
}

std::span<const JetLayout::DerivativeTerm> JetLayout::derivative_terms(
    std::size_t var) const {
  if (lower_ == nullptr) throw NumericalError("insufficient jet order");
  return derivatives_.at(var);
}

// ---------------------------------------------------------------------------
// JetSpace

JetSpace::JetSpace(Point point, int order)
    : point_(std::make_shared<const Point>(std::move(point))),
      layout_(&JetLayout::get(point_->size(), order)) {}

Jet JetSpace::constant(double value) const {
  std::vector<double> c(layout_->size(), 0.0);
  c[0] = value;
  return Jet(point_, layout_, std::move(c));
}

Jet JetSpace::variable(std::size_t i) const {
  if (i >= vars()) {
    throw NumericalError("coordinate index " + std::to_string(i) +
                         " out of range for chart dimension " +
                         std::to_string(vars()));
  }
  std::vector<double> c(layout_->size(), 0.0);
  c[0] = (*point_)[i];
  if (layout_->order() >= 1) c[1 + i] = 1.0;
  return Jet(point_, layout_, std::move(c));
}

Jet lift_variable(std::size_t i, const Point& point, int order) {
  if (order < 0) throw NumericalError("jet order must be non-negative");
  return JetSpace(point, order).variable(i);
}

// ---------------------------------------------------------------------------
// Jet

double Jet::partial(std::span<const int> alpha) const {
  if (layout_ == nullptr) {
    return std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 0; })
               ? constant_
               : 0.0;
  }
  const auto k = layout_->index_of(alpha);
  double factorial = 1.0;
  for (int a : alpha) {
    for (int j = 2; j <= a; ++j) factorial *= j;
  }
  return coeffs_[k] * factorial;
}

Jet Jet::derivative(std::size_t var) const {
  if (layout_ == nullptr) return Jet();
  if (var >= layout_->vars()) {
    throw NumericalError("derivative variable out of range");
  }
  if (layout_->order() == 0) throw NumericalError("insufficient jet order");
  const auto terms = layout_->derivative_terms(var);
  std::vector<double> out(terms.size());
  for (std::size_t k = 0; k < terms.size(); ++k) {
    out[k] = coeffs_[terms[k].src] * terms[k].factor;
  }
  return Jet(point_, &layout_->truncated(layout_->order() - 1), std::move(out));
}

Jet Jet::truncated(int order) const {
  if (layout_ == nullptr || order >= layout_->order()) return *this;
  const auto& l = layout_->truncated(order);
  return Jet(point_, &l,
             std::vector<double>(coeffs_.begin(), coeffs_.begin() +
                                                      static_cast<long>(l.size())));
}

void Jet::check_compatible(const Jet& rhs) const {
  if (layout_->vars() != rhs.layout_->vars()) {
    throw NumericalError("jets over different numbers of variables");
  }
  if (point_ != rhs.point_ && *point_ != *rhs.point_) {
    throw NumericalError("jets expanded at different base points");
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.layout_ == nullptr) return *this += rhs.constant_;
  if (layout_ == nullptr) {
    const double c = constant_;
    *this = rhs;
    coeffs_[0] += c;
    return *this;
  }
  check_compatible(rhs);
  if (rhs.layout_->order() < layout_->order()) *this = truncated(rhs.layout_->order());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) { return *this += -rhs; }

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet& Jet::operator/=(const Jet& rhs) {
  if (rhs.layout_ == nullptr) return *this /= rhs.constant_;
  return *this = *this * recip(rhs);
}

Jet& Jet::operator+=(double rhs) {
  if (layout_ == nullptr) {
    constant_ += rhs;
  } else {
    coeffs_[0] += rhs;
  }
  return *this;
}

Jet& Jet::operator-=(double rhs) { return *this += -rhs; }

Jet& Jet::operator*=(double rhs) {
  if (layout_ == nullptr) {
    constant_ *= rhs;
  } else {
    for (auto& c : coeffs_) c *= rhs;
  }
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  if (std::abs(rhs) < kPoleThreshold) {
    throw NumericalError("division by zero in jet (divisor " +
                         format_value(rhs) + ")");
  }
  return *this *= 1.0 / rhs;
}

Jet operator-(const Jet& f) {
  Jet r = f;
  r *= -1.0;
  return r;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (rhs.layout_ == nullptr) return lhs * rhs.constant_;
  if (lhs.layout_ == nullptr) return rhs * lhs.constant_;
  lhs.check_compatible(rhs);
  const JetLayout& l = lhs.layout_->order() <= rhs.layout_->order()
                           ? *lhs.layout_
                           : *rhs.layout_;
  std::vector<double> out(l.size(), 0.0);
  const double* a = lhs.coeffs_.data();
  const double* b = rhs.coeffs_.data();
  for (const auto& t : l.product_terms()) out[t.out] += a[t.lhs] * b[t.rhs];
  return Jet(lhs.point_, &l, std::move(out));
}

Jet operator/(double lhs, const Jet& rhs) { return recip(rhs) * lhs; }

Jet compose(const Jet& f, std::span<const double> taylor) {
  if (f.layout_ == nullptr) return Jet(taylor[0]);
  const int d = f.layout_->order();
  if (taylor.size() < static_cast<std::size_t>(d) + 1) {
    throw NumericalError("composition needs more Taylor coefficients");
  }
  Jet h = f;
  h.coeffs_[0] = 0.0;
  Jet r(taylor[static_cast<std::size_t>(d)]);
  for (int k = d - 1; k >= 0; --k) {
    r = r * h;
    r += taylor[static_cast<std::size_t>(k)];
  }
  if (r.layout_ == nullptr) {
    // h was nilpotent of order 0: promote to a proper jet.
    Jet out = f;
    std::fill(out.coeffs_.begin(), out.coeffs_.end(), 0.0);
    out.coeffs_[0] = r.constant_;
    return out;
  }
  return r;
}

namespace {

std::vector<double> trig_series(double x0, int order, bool is_sin) {
  std::vector<double> t(static_cast<std::size_t>(order) + 1);
  const double s = std::sin(x0);
  const double c = std::cos(x0);
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    const int phase = (k + (is_sin ? 0 : 1)) % 4;
    const double d = phase == 0 ? s : phase == 1 ? c : phase == 2 ? -s : -c;
    t[static_cast<std::size_t>(k)] = d / fact;
  }
  return t;
}

}  // namespace

Jet sin(const Jet& f) {
  if (f.is_exact_constant()) return Jet(std::sin(f.value()));
  return compose(f, trig_series(f.value(), f.order(), true));
}

Jet cos(const Jet& f) {
  if (f.is_exact_constant()) return Jet(std::cos(f.value()));
  return compose(f, trig_series(f.value(), f.order(), false));
}

Jet tan(const Jet& f) {
  const double c = std::cos(f.value());
  if (std::abs(c) < kPoleThreshold) {
    throw NumericalError("tan pole in jet at value " + format_value(f.value()));
  }
  if (f.is_exact_constant()) return Jet(std::tan(f.value()));
  return sin(f) * recip(cos(f));
}

Jet recip(const Jet& f) {
  const double x0 = f.value();
  if (std::abs(x0) < kPoleThreshold) {
    throw NumericalError("division by zero in jet (value " + format_value(x0) +
                         ")");
  }
  if (f.is_exact_constant()) return Jet(1.0 / x0);
  const int d = f.order();
  std::vector<double> t(static_cast<std::size_t>(d) + 1);
  double p = 1.0 / x0;
  for (int k = 0; k <= d; ++k) {
    t[static_cast<std::size_t>(k)] = p;
    p *= -1.0 / x0;
  }
  return compose(f, t);
}

Jet sqrt(const Jet& f) {
  const double x0 = f.value();
  if (!(x0 > 0.0)) {
    throw NumericalError("sqrt of non-positive value " + format_value(x0) +
                         " in jet");
  }
  if (f.is_exact_constant()) return Jet(std::sqrt(x0));
  const int d = f.order();
  std::vector<double> t(static_cast<std::size_t>(d) + 1);
  // binom(1/2, k) * x0^(1/2 - k)
  double coeff = std::sqrt(x0);
  for (int k = 0; k <= d; ++k) {
    t[static_cast<std::size_t>(k)] = coeff;
    coeff *= (0.5 - k) / (k + 1) / x0;
  }
  return compose(f, t);
}

Jet pow_int(const Jet& f, int exponent) {
  if (exponent < 0) return recip(pow_int(f, -exponent));
  Jet result(1.0);
  Jet base = f;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e != 0) base = base * base;
  }
  return result;
}

}  // namespace nhcurv
