#include "cuspforms/lattice.hpp"

#include <algorithm>
#include <string>

namespace cuspforms {

CoordList full_coords(int n) {
  CoordList out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back({i, j});
  return out;
}

int coord_index(const CoordList& coords, Coord c) {
  for (std::size_t k = 0; k < coords.size(); ++k)
    if (coords[k] == c) return static_cast<int>(k);
  return -1;
}

bool coords_subset(const CoordList& sub, const CoordList& coords) {
  for (Coord c : sub)
    if (coord_index(coords, c) < 0) return false;
  return true;
}

LatticeWindow::LatticeWindow(std::int64_t p, int n, CoordList coords, int a,
                             int b)
    : p_(p), n_(n), coords_(std::move(coords)), a_(a), b_(b) {
  if (!is_prime(p_)) throw ValidationError("LatticeWindow: p must be prime");
  if (n_ < 1) throw ValidationError("LatticeWindow: n must be >= 1");
  if (b_ < a_) throw ValidationError("LatticeWindow: invariance scale below support");
  for (std::size_t k = 0; k < coords_.size(); ++k) {
    Coord c = coords_[k];
    if (c.i < 0 || c.i >= n_ || c.j < 0 || c.j >= n_)
      throw ValidationError("LatticeWindow: coordinate out of range");
    for (std::size_t l = k + 1; l < coords_.size(); ++l)
      if (coords_[l] == c) throw ValidationError("LatticeWindow: duplicate coordinate");
  }
  radix_ = pow_i64(p_, depth());
  count_ = 1;
  const std::int64_t cap = std::int64_t{1} << 62;
  for (int c = 0; c < dim(); ++c) {
    if (count_ > cap / radix_)
      throw Error("LatticeWindow: point count exceeds 2^62");
    count_ *= radix_;
  }
}

bool LatticeWindow::operator==(const LatticeWindow& o) const {
  return p_ == o.p_ && n_ == o.n_ && coords_ == o.coords_ && a_ == o.a_ &&
         b_ == o.b_;
}

std::vector<std::int64_t> LatticeWindow::values_of_key(std::int64_t key) const {
  if (key < 0 || key >= count_) throw Error("values_of_key: key out of range");
  std::vector<std::int64_t> vals(static_cast<std::size_t>(dim()));
  for (int c = 0; c < dim(); ++c) {
    vals[static_cast<std::size_t>(c)] = key % radix_;
    key /= radix_;
  }
  return vals;
}

std::int64_t LatticeWindow::key_of_values(
    const std::vector<std::int64_t>& values) const {
  if (static_cast<int>(values.size()) != dim())
    throw Error("key_of_values: wrong coordinate count");
  std::int64_t key = 0;
  for (int c = dim() - 1; c >= 0; --c) {
    std::int64_t v = values[static_cast<std::size_t>(c)];
    if (v < 0 || v >= radix_) throw Error("key_of_values: digit out of range");
    key = key * radix_ + v;
  }
  return key;
}

std::int64_t LatticeWindow::add_keys(std::int64_t k1, std::int64_t k2) const {
  auto v1 = values_of_key(k1);
  auto v2 = values_of_key(k2);
  for (int c = 0; c < dim(); ++c)
    v1[static_cast<std::size_t>(c)] =
        (v1[static_cast<std::size_t>(c)] + v2[static_cast<std::size_t>(c)]) %
        radix_;
  return key_of_values(v1);
}

std::int64_t LatticeWindow::negate_key(std::int64_t k) const {
  auto v = values_of_key(k);
  for (int c = 0; c < dim(); ++c)
    v[static_cast<std::size_t>(c)] =
        (radix_ - v[static_cast<std::size_t>(c)]) % radix_;
  return key_of_values(v);
}

ScaledMatrix LatticeWindow::representative(std::int64_t key,
                                           int digits) const {
  if (digits < std::max(1, depth()))
    throw Error("representative: digits below the window depth");
  auto vals = values_of_key(key);
  ScaledMatrix m(p_, n_, a_, digits);
  for (int c = 0; c < dim(); ++c) {
    Coord co = coords_[static_cast<std::size_t>(c)];
    m.set(co.i, co.j, vals[static_cast<std::size_t>(c)]);
  }
  return m;
}

ScaledMatrix LatticeWindow::representative(std::int64_t key) const {
  return representative(key, std::max(1, depth()));
}

std::optional<std::int64_t> LatticeWindow::key_of(
    const ScaledMatrix& X) const {
  if (X.p() != p_ || X.n() != n_) throw Error("key_of: shape mismatch");
  if (X.abs_precision() < b_)
    throw PrecisionError("key_of: matrix not determined mod p^b");
  std::vector<std::int64_t> vals(static_cast<std::size_t>(dim()), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      ScaledResidue e = X.entry(i, j);  // canonical: scale is the valuation
      int idx = coord_index(coords_, {i, j});
      if (e.is_zero_at_precision()) continue;  // valuation >= abs >= b
      int val = e.scale();
      if (idx < 0) {
        if (val < b_) return std::nullopt;  // nonzero off the subspace
        continue;
      }
      if (val < a_) return std::nullopt;  // below the support window
      std::int64_t digit = 0;
      if (val < b_)
        digit = mul_mod(e.residue() % radix_, pow_i64(p_, val - a_), radix_);
      vals[static_cast<std::size_t>(idx)] = digit;
    }
  return key_of_values(vals);
}

LatticeWindow LatticeWindow::dual() const {
  return LatticeWindow(p_, n_, coords_, -b_, -a_);
}

LatticeWindow LatticeWindow::shifted(int k) const {
  return LatticeWindow(p_, n_, coords_, a_ + k, b_ + k);
}

LatticeWindow LatticeWindow::restricted(const CoordList& sub) const {
  if (!coords_subset(sub, coords_))
    throw DomainViolation("restricted: not a subset of the window coordinates");
  return LatticeWindow(p_, n_, sub, a_, b_);
}

SchwartzFunction::SchwartzFunction(LatticeWindow window)
    : window_(std::move(window)) {}

SchwartzFunction SchwartzFunction::delta(const LatticeWindow& w,
                                         std::int64_t key, Cyclotomic value) {
  SchwartzFunction f(w);
  f.set(key, std::move(value));
  return f;
}

SchwartzFunction SchwartzFunction::indicator(const LatticeWindow& w) {
  SchwartzFunction f(w);
  for (std::int64_t k = 0; k < w.point_count(); ++k)
    f.set(k, Cyclotomic::one(w.p()));
  return f;
}

void SchwartzFunction::set(std::int64_t key, Cyclotomic value) {
  if (key < 0 || key >= window_.point_count())
    throw Error("SchwartzFunction::set: key out of range");
  if (value.is_zero())
    v_.erase(key);
  else
    v_.insert_or_assign(key, std::move(value));
}

Cyclotomic SchwartzFunction::value_at_key(std::int64_t key) const {
  auto it = v_.find(key);
  return it == v_.end() ? Cyclotomic::zero(window_.p()) : it->second;
}

Cyclotomic SchwartzFunction::evaluate(const ScaledMatrix& X) const {
  auto key = window_.key_of(X);
  if (!key) return Cyclotomic::zero(window_.p());
  return value_at_key(*key);
}

bool SchwartzFunction::operator==(const SchwartzFunction& o) const {
  return window_ == o.window_ && v_ == o.v_;
}

SchwartzFunction scale_function(const SchwartzFunction& phi,
                                const ScaledResidue& lambda) {
  const LatticeWindow& w = phi.window();
  if (lambda.p() != w.p()) throw Error("scale_function: mixed primes");
  if (lambda.is_zero_at_precision())
    throw DomainViolation("scale_function: lambda must be nonzero");
  if (lambda.digits() < w.depth())
    throw PrecisionError(
        "scale_function: lambda unit part not determined to window depth");
  const std::int64_t r = w.radix();
  const std::int64_t u = lambda.residue() % r;
  SchwartzFunction out(w.shifted(lambda.scale()));
  for (const auto& [key, val] : phi.entries()) {
    auto vals = w.values_of_key(key);
    for (auto& v : vals) v = mul_mod(u, v, r);
    out.set(out.window().key_of_values(vals), val);
  }
  return out;
}

namespace {

// Position pairing induced by tr(XY) = sum_ij X_ij Y_ji on the row-major
// full coordinate list: position of (i,j) maps to position of (j,i).
std::vector<int> transpose_pairing(int n) {
  std::vector<int> tau(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      tau[static_cast<std::size_t>(i * n + j)] = j * n + i;
  return tau;
}

void require_full_window(const SchwartzFunction& phi, const char* who) {
  if (phi.window().coords() != full_coords(phi.window().n()))
    throw DomainViolation(std::string(who) +
                          ": window must cover the full matrix space");
}

}  // namespace

SchwartzFunction fourier_transform(const SchwartzFunction& phi) {
  require_full_window(phi, "fourier_transform");
  const LatticeWindow& w = phi.window();
  const int d = w.depth();
  const int dim = w.dim();
  const std::int64_t r = w.radix();
  const auto tau = transpose_pairing(w.n());
  const long long haar = -static_cast<long long>(w.invariance_scale()) * dim;

  // Freeze the sparse input as (digit vector, value) pairs.
  std::vector<std::pair<std::vector<std::int64_t>, Cyclotomic>> src;
  src.reserve(phi.entries().size());
  for (const auto& [key, val] : phi.entries())
    src.emplace_back(w.values_of_key(key), val);

  SchwartzFunction out(w.dual());
  for (std::int64_t ky = 0; ky < w.point_count(); ++ky) {
    auto vy = w.values_of_key(ky);
    Cyclotomic acc = Cyclotomic::zero(w.p());
    for (const auto& [vx, val] : src) {
      std::int64_t e = 0;
      for (int c = 0; c < dim; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        const std::size_t pc = static_cast<std::size_t>(tau[cc]);
        e = (e + mul_mod(vx[cc], vy[pc], r)) % r;
      }
      acc = acc + val.times_root(d, e);
    }
    out.set(ky, acc.rescaled_p(haar));
  }
  return out;
}

SchwartzFunction fourier_separable(const SchwartzFunction& phi) {
  require_full_window(phi, "fourier_separable");
  const LatticeWindow& w = phi.window();
  const std::int64_t p = w.p();
  const int d = w.depth();
  const int dim = w.dim();
  const std::int64_t r = w.radix();
  const std::int64_t N = w.point_count();
  const auto tau = transpose_pairing(w.n());
  const long long haar = -static_cast<long long>(w.invariance_scale()) * dim;

  SchwartzFunction out(w.dual());
  if (phi.is_zero()) return out;

  // Working level: high enough for both the input values and the size-p^d
  // transform kernel.
  int M = d;
  long long s0 = phi.entries().begin()->second.pscale();
  for (const auto& [key, val] : phi.entries()) {
    M = std::max(M, val.level());
    s0 = std::min(s0, val.pscale());
  }
  const std::int64_t phiM = phi_p_power(p, M);
  const std::int64_t qM = M == 0 ? 1 : pow_i64(p, M);

  // Dense coefficient blocks: data[key*phiM .. key*phiM+phiM) holds the
  // level-M power-basis coefficients of p^(-s0) * phi(key).
  std::vector<BigInt> data(static_cast<std::size_t>(N * phiM));
  for (const auto& [key, val] : phi.entries()) {
    Cyclotomic lifted = val.raised_to_level(M);
    BigInt f = 1;
    for (long long k = 0; k < val.pscale() - s0; ++k) f *= p;
    const auto& cs = lifted.coeffs();
    for (std::size_t i = 0; i < cs.size(); ++i)
      data[static_cast<std::size_t>(key * phiM) + i] = cs[i] * f;
  }

  // Kernel exponent table at level M: zeta_{p^d}^(s t) = zeta_{p^M}^(E[s][t]).
  const std::int64_t lift = pow_i64(p, M - d);
  std::vector<std::int64_t> E(static_cast<std::size_t>(r * r));
  for (std::int64_t s = 0; s < r; ++s)
    for (std::int64_t t = 0; t < r; ++t)
      E[static_cast<std::size_t>(s * r + t)] = mul_mod(s, t, r) * lift;

  // One size-r pass per coordinate position.
  std::vector<std::vector<BigInt>> outblk(
      static_cast<std::size_t>(r),
      std::vector<BigInt>(static_cast<std::size_t>(phiM)));
  std::int64_t stride = 1;
  for (int c = 0; c < dim; ++c) {
    for (std::int64_t block = 0; block < N; block += stride * r)
      for (std::int64_t off = 0; off < stride; ++off) {
        const std::int64_t base = block + off;
        for (auto& blk : outblk)
          for (auto& coeff : blk) coeff = 0;
        for (std::int64_t s = 0; s < r; ++s) {
          const BigInt* in =
              &data[static_cast<std::size_t>((base + s * stride) * phiM)];
          for (std::int64_t k = 0; k < phiM; ++k) {
            if (in[k] == 0) continue;
            for (std::int64_t t = 0; t < r; ++t)
              accumulate_root_multiple(
                  outblk[static_cast<std::size_t>(t)], p, M,
                  (k + E[static_cast<std::size_t>(s * r + t)]) % qM, in[k]);
          }
        }
        for (std::int64_t t = 0; t < r; ++t) {
          BigInt* dst =
              &data[static_cast<std::size_t>((base + t * stride) * phiM)];
          for (std::int64_t k = 0; k < phiM; ++k)
            dst[k] = std::move(outblk[static_cast<std::size_t>(t)]
                                     [static_cast<std::size_t>(k)]);
        }
      }
    stride *= r;
  }

  // After the passes, position c of a key holds the dual digit paired with
  // source coordinate c, i.e. the digit of Y at the transposed coordinate.
  for (std::int64_t ku = 0; ku < N; ++ku) {
    const BigInt* blk = &data[static_cast<std::size_t>(ku * phiM)];
    bool nonzero = false;
    for (std::int64_t k = 0; k < phiM; ++k)
      if (blk[k] != 0) {
        nonzero = true;
        break;
      }
    if (!nonzero) continue;
    auto u = w.values_of_key(ku);
    std::vector<std::int64_t> vy(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c)
      vy[static_cast<std::size_t>(tau[static_cast<std::size_t>(c)])] =
          u[static_cast<std::size_t>(c)];
    out.set(out.window().key_of_values(vy),
            Cyclotomic(p, M, s0 + haar,
                       std::vector<BigInt>(blk, blk + phiM)));
  }
  return out;
}

Cyclotomic integrate_affine_slice(const SchwartzFunction& phi,
                                  const CoordList& direction,
                                  const ScaledMatrix& X) {
  const LatticeWindow& w = phi.window();
  if (!coords_subset(direction, w.coords()))
    throw DomainViolation(
        "integrate_affine_slice: direction is not a subset of the window "
        "coordinates");
  if (X.abs_precision() < w.invariance_scale())
    throw PrecisionError(
        "integrate_affine_slice: X not determined mod p^b");
  LatticeWindow sub = w.restricted(direction);
  Cyclotomic acc = Cyclotomic::zero(w.p());
  for (std::int64_t k = 0; k < sub.point_count(); ++k)
    acc = acc + phi.evaluate(X + sub.representative(k));
  const long long haar =
      -static_cast<long long>(w.invariance_scale()) * sub.dim();
  return acc.rescaled_p(haar);
}

}  // namespace cuspforms
