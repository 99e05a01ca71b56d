#include "greedylab/coefficients.hpp"

#include <algorithm>
#include <string>

namespace greedylab {

CoefficientVector::CoefficientVector(std::size_t ambient) : ambient_(ambient) {}

CoefficientVector::CoefficientVector(std::size_t ambient, std::vector<Entry> entries)
    : ambient_(ambient), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const Index i = entries_[k].index;
    if (i < 1 || i > ambient_) {
      throw ConfigError("coefficient index " + std::to_string(i) + " outside 1.." +
                        std::to_string(ambient_));
    }
    if (k > 0 && entries_[k - 1].index == i) {
      throw ConfigError("duplicate coefficient index " + std::to_string(i));
    }
  }
}

CoefficientVector CoefficientVector::dense(std::span<const double> values) {
  std::vector<Entry> e;
  e.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != 0.0) e.push_back({k + 1, values[k]});
  }
  return CoefficientVector(values.size(), std::move(e));
}

CoefficientVector CoefficientVector::dense(std::span<const Scalar> values) {
  std::vector<Entry> e;
  e.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != Scalar{}) e.push_back({k + 1, values[k]});
  }
  return CoefficientVector(values.size(), std::move(e));
}

CoefficientVector CoefficientVector::dense(std::initializer_list<double> values) {
  return dense(std::span<const double>(values.begin(), values.size()));
}

CoefficientVector CoefficientVector::indicator(std::size_t ambient, std::span<const Index> set) {
  std::vector<Entry> e;
  e.reserve(set.size());
  for (Index i : set) e.push_back({i, 1.0});
  return CoefficientVector(ambient, std::move(e));
}

Scalar CoefficientVector::operator[](Index i) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                             [](const Entry& e, Index v) { return e.index < v; });
  if (it != entries_.end() && it->index == i) return it->value;
  return {};
}

std::size_t CoefficientVector::support_size() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [](const Entry& e) { return e.value != Scalar{}; }));
}

std::vector<Index> CoefficientVector::support() const {
  std::vector<Index> out;
  for (const auto& e : entries_) {
    if (e.value != Scalar{}) out.push_back(e.index);
  }
  return out;
}

std::vector<Scalar> CoefficientVector::to_dense() const {
  std::vector<Scalar> out(ambient_);
  for (const auto& e : entries_) out[e.index - 1] = e.value;
  return out;
}

bool CoefficientVector::is_real() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return e.value.imag() == 0.0; });
}

double CoefficientVector::sup_modulus() const noexcept {
  double top = 0.0;
  for (const auto& e : entries_) top = std::max(top, std::abs(e.value));
  return top;
}

CoefficientVector CoefficientVector::pruned() const {
  CoefficientVector out(ambient_);
  for (const auto& e : entries_) {
    if (e.value != Scalar{}) out.entries_.push_back(e);
  }
  return out;
}

CoefficientVector CoefficientVector::modulus() const {
  CoefficientVector out(ambient_);
  for (const auto& e : entries_) {
    if (e.value != Scalar{}) out.entries_.push_back({e.index, std::abs(e.value)});
  }
  return out;
}

bool operator==(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.ambient_ != b.ambient_) return false;
  const auto pa = a.pruned();
  const auto pb = b.pruned();
  if (pa.entries_.size() != pb.entries_.size()) return false;
  for (std::size_t k = 0; k < pa.entries_.size(); ++k) {
    if (pa.entries_[k].index != pb.entries_[k].index ||
        pa.entries_[k].value != pb.entries_[k].value) {
      return false;
    }
  }
  return true;
}

namespace {

template <typename Op>
CoefficientVector merge(const CoefficientVector& a, const CoefficientVector& b, Op op) {
  if (a.ambient_size() != b.ambient_size()) {
    throw ConfigError("ambient size mismatch: " + std::to_string(a.ambient_size()) + " vs " +
                      std::to_string(b.ambient_size()));
  }
  std::vector<Entry> out;
  auto ea = a.entries();
  auto eb = b.entries();
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].index < eb[j].index)) {
      out.push_back({ea[i].index, op(ea[i].value, Scalar{})});
      ++i;
    } else if (i == ea.size() || eb[j].index < ea[i].index) {
      out.push_back({eb[j].index, op(Scalar{}, eb[j].value)});
      ++j;
    } else {
      out.push_back({ea[i].index, op(ea[i].value, eb[j].value)});
      ++i;
      ++j;
    }
  }
  return CoefficientVector(a.ambient_size(), std::move(out));
}

}  // namespace

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b) {
  return merge(a, b, [](Scalar x, Scalar y) { return x + y; });
}

CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b) {
  return merge(a, b, [](Scalar x, Scalar y) { return x - y; });
}

CoefficientVector operator*(Scalar lambda, const CoefficientVector& f) {
  CoefficientVector out(f.ambient_);
  out.entries_ = f.entries_;
  for (auto& e : out.entries_) e.value *= lambda;
  return out;
}

}  // namespace greedylab
