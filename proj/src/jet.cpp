#include "courant/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "courant/error.hpp"

namespace courant {

namespace {

void enumerate(int dim, int remaining, std::vector<int>& cur, int pos,
               std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    enumerate(dim, remaining - e, cur, pos + 1, out);
  }
}

std::int64_t encode(std::span<const int> alpha, int base) {
  std::int64_t key = 0;
  for (int e : alpha) key = key * base + e;
  return key;
}

}  // namespace

int MonomialTable::index_of(std::span<const int> alpha) const {
  int deg = std::accumulate(alpha.begin(), alpha.end(), 0);
  if (deg > order) return -1;
  // graded blocks are contiguous; linear scan inside the block is fine at
  // these sizes
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (degree[k] == deg && std::equal(alpha.begin(), alpha.end(), exponents[k].begin()))
      return static_cast<int>(k);
  }
  return -1;
}

std::shared_ptr<const MonomialTable> MonomialTable::get(int dim, int order) {
  require(dim >= 1 && dim <= 8, ErrorCode::invalid_argument, "jet dimension out of range");
  require(order >= 0 && order <= 8, ErrorCode::invalid_argument, "jet order out of range");
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialTable>> cache;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(dim, order);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  auto t = std::make_shared<MonomialTable>();
  t->dim = dim;
  t->order = order;
  std::vector<int> cur(dim);
  for (int d = 0; d <= order; ++d) enumerate(dim, d, cur, 0, t->exponents);
  const std::size_t m = t->exponents.size();
  t->degree.resize(m);
  std::map<std::int64_t, int> lookup;
  const int base = order + 2;
  for (std::size_t k = 0; k < m; ++k) {
    t->degree[k] = std::accumulate(t->exponents[k].begin(), t->exponents[k].end(), 0);
    lookup[encode(t->exponents[k], base)] = static_cast<int>(k);
  }
  t->product.resize(m);
  std::vector<int> sum(dim);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (t->degree[a] + t->degree[b] > order) continue;
      for (int j = 0; j < dim; ++j) sum[j] = t->exponents[a][j] + t->exponents[b][j];
      t->product[lookup.at(encode(sum, base))].emplace_back(static_cast<int>(a), static_cast<int>(b));
    }
  }
  t->shift.assign(dim, std::vector<int>(m, -1));
  for (int j = 0; j < dim; ++j) {
    for (std::size_t a = 0; a < m; ++a) {
      if (t->degree[a] + 1 > order) continue;
      sum = t->exponents[a];
      sum[j] += 1;
      t->shift[j][a] = lookup.at(encode(sum, base));
    }
  }
  cache.emplace(key, t);
  return t;
}

Jet::Jet(int dim, int order)
    : table_(MonomialTable::get(dim, order)), coeffs_(table_->exponents.size(), 0.0) {}

Jet Jet::constant(int dim, int order, double value) {
  Jet j(dim, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::coordinate(int dim, int order, int j, double at) {
  Jet out = constant(dim, order, at);
  if (order >= 1) out.coeffs_[out.table_->shift[j][0]] = 1.0;
  return out;
}

double Jet::first(int j) const {
  if (order() < 1) fail(ErrorCode::degree, "jet has no first derivatives");
  return coeffs_[table_->shift[j][0]];
}

double Jet::partial(std::span<const int> alpha) const {
  int k = table_->index_of(alpha);
  if (k < 0) fail(ErrorCode::degree, "requested derivative exceeds jet order");
  double fact = 1.0;
  for (int e : alpha)
    for (int i = 2; i <= e; ++i) fact *= i;
  return coeffs_[k] * fact;
}

Jet Jet::derivative(int j) const {
  require(order() >= 1, ErrorCode::degree, "cannot differentiate an order-0 jet");
  Jet out(dim(), order() - 1);
  const auto& small = *out.table_;
  for (std::size_t a = 0; a < small.exponents.size(); ++a) {
    int up = table_->shift[j][table_->index_of(small.exponents[a])];
    out.coeffs_[a] = coeffs_[up] * (small.exponents[a][j] + 1);
  }
  return out;
}

Jet Jet::truncate(int order) const {
  if (order >= this->order()) return *this;
  Jet out(dim(), order);
  // graded ordering: lower-degree monomials come first in both tables
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.order() < order()) *this = truncate(o.order());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.order() < order()) *this = truncate(o.order());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "jet dimension mismatch");
  Jet out(a.dim(), std::min(a.order(), b.order()));
  out.add_product(a, b);
  return out;
}

void Jet::add_product(const Jet& a, const Jet& b, double scale) {
  // a and b may carry more terms than *this; indices of the lower-order
  // graded table coincide with the leading indices of the larger tables
  const auto& t = *table_;
  require(a.order() >= t.order && b.order() >= t.order, ErrorCode::degree,
          "jet product operands of too low order");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    double acc = 0.0;
    for (auto [i, j] : t.product[k]) acc += a.coeffs_[i] * b.coeffs_[j];
    coeffs_[k] += scale * acc;
  }
}

}  // namespace courant
