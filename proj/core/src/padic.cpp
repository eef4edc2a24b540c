#include "cuspforms/padic.hpp"

#include <algorithm>
#include <string>

namespace cuspforms {

namespace {

std::int64_t floor_mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::int64_t pow_i64(std::int64_t base, int exp) {
  if (exp < 0) throw Error("pow_i64: negative exponent");
  std::int64_t r = 1;
  constexpr std::int64_t kCap = std::int64_t(1) << 62;
  for (int i = 0; i < exp; ++i) {
    if (r > kCap / base) throw Error("pow_i64: overflow past 2^62");
    r *= base;
  }
  return r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(
      (static_cast<__int128>(a) * static_cast<__int128>(b)) % m);
}

std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t m) {
  if (e < 0) throw Error("pow_mod: negative exponent");
  std::int64_t r = 1 % m;
  a = floor_mod(a, m);
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  // extended Euclid
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = m, new_r = floor_mod(a, m);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw Error("inv_mod: not a unit");
  return floor_mod(t, m);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int val_p(std::int64_t v, std::int64_t p) {
  if (v == 0) throw Error("val_p: valuation of zero is undefined");
  if (v < 0) v = -v;
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

int factorial_val_p(std::int64_t k, std::int64_t p) {
  int v = 0;
  for (std::int64_t q = p; q <= k; q *= p) {
    v += static_cast<int>(k / q);
    if (q > k / p) break;  // avoid overflow of q *= p
  }
  return v;
}

// ---- PrimeContext ----

PrimeContext::PrimeContext(std::int64_t p, int working_exponent)
    : p_(p), w_(working_exponent) {
  if (!is_prime(p)) throw Error("PrimeContext: p must be prime");
  if (w_ < 1) throw Error("PrimeContext: working exponent must be >= 1");
  pow_i64(p_, w_);  // reject contexts whose residues cannot fit in 64 bits
}

// ---- ScaledResidue ----

ScaledResidue::ScaledResidue(std::int64_t p, int scale, std::int64_t residue,
                             int digits)
    : p_(p), scale_(scale), residue_(residue), digits_(digits) {
  if (digits_ < 0) throw Error("ScaledResidue: negative digit count");
  residue_ = floor_mod(residue_, pow_i64(p_, digits_));
  canonicalize();
}

void ScaledResidue::canonicalize() {
  while (residue_ != 0 && residue_ % p_ == 0) {
    residue_ /= p_;
    ++scale_;
    --digits_;
  }
}

ScaledResidue ScaledResidue::from_integer(const PrimeContext& ctx,
                                          std::int64_t v) {
  return ScaledResidue(ctx.p(), 0, v, ctx.working_exponent());
}

ScaledResidue ScaledResidue::zero(const PrimeContext& ctx) {
  return ScaledResidue(ctx.p(), 0, 0, ctx.working_exponent());
}

ScaledResidue ScaledResidue::uniformizer_power(const PrimeContext& ctx,
                                               int k) {
  return ScaledResidue(ctx.p(), k, 1, ctx.working_exponent());
}

LatticeValuation ScaledResidue::valuation() const {
  if (residue_ == 0) return LatticeValuation{false, scale_ + digits_};
  return LatticeValuation{true, scale_};  // canonical: residue is a unit
}

ScaledResidue ScaledResidue::reciprocal() const {
  if (residue_ == 0) throw DomainViolation("reciprocal of zero residue");
  // canonical form: residue is a unit mod p^digits
  std::int64_t m = pow_i64(p_, digits_);
  return ScaledResidue(p_, -scale_, inv_mod(residue_, m), digits_);
}

ScaledResidue ScaledResidue::operator*(const ScaledResidue& o) const {
  if (p_ != o.p_) throw Error("ScaledResidue: mixed primes");
  int d = std::min(digits_, o.digits_);
  std::int64_t m = pow_i64(p_, d);
  return ScaledResidue(p_, scale_ + o.scale_,
                       mul_mod(residue_ % m, o.residue_ % m, m), d);
}

ScaledResidue ScaledResidue::operator+(const ScaledResidue& o) const {
  if (p_ != o.p_) throw Error("ScaledResidue: mixed primes");
  int a = std::min(scale_, o.scale_);
  int ap = std::min(abs_precision(), o.abs_precision());
  int d = ap - a;
  std::int64_t m = pow_i64(p_, d);
  std::int64_t r1 = mul_mod(residue_, pow_i64(p_, scale_ - a) % m, m);
  std::int64_t r2 = mul_mod(o.residue_, pow_i64(p_, o.scale_ - a) % m, m);
  return ScaledResidue(p_, a, (r1 + r2) % m, d);
}

ScaledResidue ScaledResidue::operator-() const {
  std::int64_t m = pow_i64(p_, digits_);
  return ScaledResidue(p_, scale_, floor_mod(-residue_, m), digits_);
}

bool ScaledResidue::congruent(const ScaledResidue& o) const {
  if (p_ != o.p_) return false;
  int ap = std::min(abs_precision(), o.abs_precision());
  int a = std::min(scale_, o.scale_);
  if (ap <= a) return true;  // no shared determined digits
  std::int64_t m = pow_i64(p_, ap - a);
  std::int64_t r1 = mul_mod(residue_ % m, pow_i64(p_, scale_ - a) % m, m);
  std::int64_t r2 = mul_mod(o.residue_ % m, pow_i64(p_, o.scale_ - a) % m, m);
  return r1 == r2;
}

// ---- ScaledMatrix ----

ScaledMatrix::ScaledMatrix(std::int64_t p, int n, int scale, int digits)
    : p_(p), n_(n), scale_(scale), digits_(digits),
      e_(static_cast<std::size_t>(n) * n, 0) {
  if (n_ < 1) throw Error("ScaledMatrix: size must be >= 1");
  if (digits_ < 1) throw Error("ScaledMatrix: digit count must be >= 1");
  pow_i64(p_, digits_);
}

ScaledMatrix ScaledMatrix::identity(const PrimeContext& ctx, int n) {
  ScaledMatrix m(ctx.p(), n, 0, ctx.working_exponent());
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

ScaledMatrix ScaledMatrix::zero(const PrimeContext& ctx, int n) {
  return ScaledMatrix(ctx.p(), n, 0, ctx.working_exponent());
}

void ScaledMatrix::set(int i, int j, std::int64_t residue) {
  e_[i * n_ + j] = floor_mod(residue, modulus());
}

ScaledResidue ScaledMatrix::entry(int i, int j) const {
  return ScaledResidue(p_, scale_, at(i, j), digits_);
}

ScaledMatrix ScaledMatrix::rebased(int new_scale) const {
  if (new_scale > scale_)
    throw PrecisionError("rebased: cannot raise the scale of a matrix");
  int d = abs_precision() - new_scale;
  ScaledMatrix out(p_, n_, new_scale, d);
  std::int64_t m = out.modulus();
  std::int64_t f = pow_i64(p_, scale_ - new_scale) % m;
  for (int i = 0; i < n_ * n_; ++i)
    out.e_[i] = mul_mod(e_[i] % m, f, m);
  return out;
}

ScaledMatrix ScaledMatrix::truncated(int new_digits) const {
  if (new_digits > digits_)
    throw PrecisionError("truncated: cannot add digits");
  ScaledMatrix out(p_, n_, scale_, new_digits);
  std::int64_t m = out.modulus();
  for (int i = 0; i < n_ * n_; ++i) out.e_[i] = e_[i] % m;
  return out;
}

ScaledMatrix ScaledMatrix::operator+(const ScaledMatrix& o) const {
  if (p_ != o.p_ || n_ != o.n_) throw Error("ScaledMatrix: shape mismatch");
  int a = std::min(scale_, o.scale_);
  int ap = std::min(abs_precision(), o.abs_precision());
  if (ap - a < 1) throw PrecisionError("ScaledMatrix+: no overlapping digits");
  ScaledMatrix lhs = rebased(a).truncated(ap - a);
  ScaledMatrix rhs = o.rebased(a).truncated(ap - a);
  std::int64_t m = lhs.modulus();
  for (int i = 0; i < n_ * n_; ++i)
    lhs.e_[i] = (lhs.e_[i] + rhs.e_[i]) % m;
  return lhs;
}

ScaledMatrix ScaledMatrix::operator-(const ScaledMatrix& o) const {
  return *this + (-o);
}

ScaledMatrix ScaledMatrix::operator-() const {
  ScaledMatrix out = *this;
  std::int64_t m = modulus();
  for (auto& v : out.e_) v = floor_mod(-v, m);
  return out;
}

ScaledMatrix ScaledMatrix::operator*(const ScaledMatrix& o) const {
  if (p_ != o.p_ || n_ != o.n_) throw Error("ScaledMatrix: shape mismatch");
  // Entries live in Z_p at their scale, so the product of values at scales
  // (s1, s2) is determined mod p^(s1+s2+min(d1,d2)).
  int d = std::min(digits_, o.digits_);
  ScaledMatrix out(p_, n_, scale_ + o.scale_, d);
  std::int64_t m = out.modulus();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      std::int64_t acc = 0;
      for (int k = 0; k < n_; ++k)
        acc = (acc + mul_mod(at(i, k) % m, o.at(k, j) % m, m)) % m;
      out.e_[i * n_ + j] = acc;
    }
  return out;
}

bool ScaledMatrix::congruent(const ScaledMatrix& o) const {
  if (p_ != o.p_ || n_ != o.n_) return false;
  int a = std::min(scale_, o.scale_);
  int ap = std::min(abs_precision(), o.abs_precision());
  if (ap <= a) return true;
  ScaledMatrix lhs = rebased(a).truncated(ap - a);
  ScaledMatrix rhs = o.rebased(a).truncated(ap - a);
  return lhs.e_ == rhs.e_;
}

LatticeValuation lattice_valuation(const ScaledMatrix& m) {
  bool any = false;
  int best = 0;
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) {
      std::int64_t e = m.at(i, j);
      if (e == 0) continue;
      int v = m.scale() + val_p(e, m.p());
      if (!any || v < best) best = v;
      any = true;
    }
  if (!any) return LatticeValuation{false, m.abs_precision()};
  return LatticeValuation{true, best};
}

// ---- ResiduePolynomial ----

ResiduePolynomial::ResiduePolynomial(std::int64_t p, int modulus_exponent,
                                     std::vector<std::int64_t> coeffs)
    : p_(p), exp_(modulus_exponent), c_(std::move(coeffs)) {
  if (exp_ < 1) throw Error("ResiduePolynomial: modulus exponent must be >= 1");
  std::int64_t m = pow_i64(p_, exp_);
  for (auto& c : c_) c = floor_mod(c, m);
  while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
  if (c_.empty()) c_.push_back(0);
}

std::int64_t ResiduePolynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[k];
}

bool ResiduePolynomial::is_monic() const {
  return degree() >= 0 && c_.back() == 1;
}

ResiduePolynomial ResiduePolynomial::reduced_mod_p() const {
  std::vector<std::int64_t> c(c_);
  for (auto& v : c) v %= p_;
  return ResiduePolynomial(p_, 1, std::move(c));
}

// ---- characteristic polynomial (Berkowitz) ----

ResiduePolynomial charpoly_division_free(const ScaledMatrix& mat) {
  if (mat.scale() < 0)
    throw DomainViolation(
        "charpoly_division_free: matrix must be integral (scale >= 0)");
  const int n = mat.n();
  const int d = mat.digits();
  const std::int64_t m = mat.modulus();
  // Fold the scale into the residues: the value is determined mod p^d.
  std::vector<std::int64_t> a(static_cast<std::size_t>(n) * n);
  std::int64_t f = pow_i64(mat.p(), mat.scale()) % m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = mul_mod(mat.at(i, j) % m, f, m);

  // vec holds the characteristic polynomial of the leading r x r principal
  // submatrix, highest power first; one Toeplitz product per added row.
  std::vector<std::int64_t> vec{1};
  for (int r = 0; r < n; ++r) {
    // t[k]: 1, -a[r][r], then -(row r) * A^(k-2) * (col r) over the leading
    // r x r block A.
    std::vector<std::int64_t> t(r + 2);
    t[0] = 1;
    t[1] = floor_mod(-a[r * n + r], m);
    std::vector<std::int64_t> w(r);
    for (int i = 0; i < r; ++i) w[i] = a[i * n + r];  // column r
    for (int k = 2; k <= r + 1; ++k) {
      std::int64_t dot = 0;
      for (int i = 0; i < r; ++i)
        dot = (dot + mul_mod(a[r * n + i], w[i], m)) % m;
      t[k] = floor_mod(-dot, m);
      if (k <= r) {
        std::vector<std::int64_t> w2(r, 0);
        for (int i = 0; i < r; ++i) {
          std::int64_t acc = 0;
          for (int j = 0; j < r; ++j)
            acc = (acc + mul_mod(a[i * n + j], w[j], m)) % m;
          w2[i] = acc;
        }
        w.swap(w2);
      }
    }
    std::vector<std::int64_t> next(r + 2, 0);
    for (int i = 0; i < static_cast<int>(next.size()); ++i)
      for (int j = 0; j <= std::min<int>(i, static_cast<int>(vec.size()) - 1);
           ++j)
        if (i - j <= r + 1)
          next[i] = (next[i] + mul_mod(t[i - j], vec[j], m)) % m;
    vec.swap(next);
  }
  std::reverse(vec.begin(), vec.end());  // ascending order
  return ResiduePolynomial(mat.p(), d, std::move(vec));
}

// ---- irreducibility over F_p ----

namespace {

using Poly = std::vector<std::int64_t>;  // ascending, over F_p

Poly poly_trim(Poly a) {
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  return a;
}

Poly poly_mul_fp(const Poly& a, const Poly& b, std::int64_t p) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_trim(std::move(r));
}

// Remainder of a modulo monic-leading f over F_p (leading coeff inverted).
Poly poly_rem_fp(Poly a, const Poly& f, std::int64_t p) {
  std::int64_t lead_inv = inv_mod(f.back(), p);
  while (a.size() >= f.size() && !(a.size() == 1 && a[0] == 0)) {
    std::int64_t c = mul_mod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - f.size();
    for (std::size_t i = 0; i < f.size(); ++i)
      a[shift + i] = floor_mod(a[shift + i] - c * f[i], p);
    a = poly_trim(std::move(a));
    if (a.size() < f.size()) break;
  }
  return poly_trim(std::move(a));
}

Poly poly_powmod_fp(Poly base, std::int64_t e, const Poly& f, std::int64_t p) {
  Poly r{1};
  base = poly_rem_fp(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = poly_rem_fp(poly_mul_fp(r, base, p), f, p);
    base = poly_rem_fp(poly_mul_fp(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd_fp(Poly a, Poly b, std::int64_t p) {
  a = poly_trim(std::move(a));
  b = poly_trim(std::move(b));
  while (!(b.size() == 1 && b[0] == 0)) {
    Poly r = poly_rem_fp(a, b, p);
    a.swap(b);
    b = std::move(r);
  }
  return a;
}

bool poly_is_x(const Poly& a) { return a.size() == 2 && a[0] == 0 && a[1] == 1; }

}  // namespace

bool irreducible_over_residue_field(const ResiduePolynomial& f_in) {
  ResiduePolynomial f = f_in.modulus_exponent() == 1 ? f_in
                                                     : f_in.reduced_mod_p();
  if (!f.is_monic())
    throw DomainViolation(
        "irreducible_over_residue_field: polynomial must be monic mod p");
  const std::int64_t p = f.p();
  const int n = f.degree();
  if (n < 1)
    throw DomainViolation("irreducible_over_residue_field: degree must be >= 1");
  if (n == 1) return true;
  const Poly fv(f.coeffs().begin(), f.coeffs().end());
  const Poly x{0, 1};

  // frob[k] = x^(p^k) mod f
  Poly frob = x;
  std::vector<Poly> powers(n + 1);
  powers[0] = x;
  for (int k = 1; k <= n; ++k) {
    frob = poly_powmod_fp(frob, p, fv, p);
    powers[k] = frob;
  }
  if (!poly_is_x(powers[n])) return false;
  for (int q = 2; q <= n; ++q) {
    if (!is_prime(q) || n % q != 0) continue;
    Poly diff = powers[n / q];
    // diff - x
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = floor_mod(diff[1] - 1, p);
    diff = poly_trim(std::move(diff));
    Poly g = poly_gcd_fp(fv, diff, p);
    if (!(g.size() == 1 && g[0] != 0)) return false;
  }
  return true;
}

// ---- exp / log ----

namespace {

// Plain residue matrices mod a single modulus, for series interiors.
struct FlatMatrix {
  int n;
  std::int64_t mod;
  std::vector<std::int64_t> e;

  static FlatMatrix identity(int n, std::int64_t mod) {
    FlatMatrix f{n, mod, std::vector<std::int64_t>(std::size_t(n) * n, 0)};
    for (int i = 0; i < n; ++i) f.e[i * n + i] = 1 % mod;
    return f;
  }
  FlatMatrix mul(const FlatMatrix& o) const {
    FlatMatrix r{n, mod, std::vector<std::int64_t>(std::size_t(n) * n, 0)};
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        std::int64_t a = e[i * n + k];
        if (a == 0) continue;
        for (int j = 0; j < n; ++j)
          r.e[i * n + j] = (r.e[i * n + j] + mul_mod(a, o.e[k * n + j], mod)) % mod;
      }
    return r;
  }
  void add_scaled(const FlatMatrix& o, std::int64_t c) {
    for (std::size_t i = 0; i < e.size(); ++i)
      e[i] = (e[i] + mul_mod(o.e[i], c, mod)) % mod;
  }
  // Divide every entry by p^a exactly, then multiply by the inverse of u.
  void divide_exact(std::int64_t p, int a, std::int64_t u) {
    std::int64_t q = pow_i64(p, a);
    std::int64_t ui = inv_mod(u, mod);
    for (auto& v : e) {
      if (v % q != 0)
        throw Error("series division: residue not divisible as claimed");
      v = mul_mod(v / q, ui, mod);
    }
  }
};

// Present the value at scale 0 modulo `mod`.  Negative scales are folded by
// exact division, which the caller guarantees through a valuation check.
FlatMatrix flatten(const ScaledMatrix& x, std::int64_t mod) {
  FlatMatrix f{x.n(), mod, std::vector<std::int64_t>(std::size_t(x.n()) * x.n(), 0)};
  if (x.scale() >= 0) {
    std::int64_t s = pow_i64(x.p(), x.scale()) % mod;
    for (int i = 0; i < x.n(); ++i)
      for (int j = 0; j < x.n(); ++j)
        f.e[i * x.n() + j] = mul_mod(x.at(i, j) % mod, s, mod);
  } else {
    std::int64_t q = pow_i64(x.p(), -x.scale());
    for (int i = 0; i < x.n(); ++i)
      for (int j = 0; j < x.n(); ++j) {
        std::int64_t e = x.at(i, j);
        if (e % q != 0)
          throw DomainViolation("flatten: matrix is not integral");
        f.e[i * x.n() + j] = (e / q) % mod;
      }
  }
  return f;
}

ScaledMatrix unflatten(const FlatMatrix& f, std::int64_t p, int digits) {
  ScaledMatrix out(p, f.n, 0, digits);
  std::int64_t m = pow_i64(p, digits);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) out.set(i, j, f.e[i * f.n + j] % m);
  return out;
}

}  // namespace

ScaledMatrix exp_truncated(const ScaledMatrix& x) {
  if (x.p() == 2)
    throw ConvergenceViolation("exp_truncated: p = 2 is outside the disc");
  LatticeValuation v = lattice_valuation(x);
  const int target = x.abs_precision();
  if (target < 1) throw PrecisionError("exp_truncated: no determined digits");
  if (!v.exact) {
    // X is zero to precision; exp(X) == I to the same precision.
    PrimeContext ctx(x.p(), target);
    return ScaledMatrix::identity(ctx, x.n());
  }
  if (v.value < 1)
    throw ConvergenceViolation("exp_truncated: requires valuation >= 1");

  const std::int64_t p = x.p();
  const int val = v.value;
  // Cutoff: least K with k*val - val_p(k!) >= target for all k >= K; with
  // val_p(k!) <= (k-1)/(p-1) it suffices that k >= (target(p-1)-1)/(val(p-1)-1).
  const std::int64_t num = std::int64_t(target) * (p - 1) - 1;
  const std::int64_t den = std::int64_t(val) * (p - 1) - 1;
  const int cutoff = static_cast<int>((num + den - 1) / den);
  const int buffer = factorial_val_p(cutoff, p);
  const std::int64_t mod = pow_i64(p, target + buffer);

  FlatMatrix xs = flatten(x, mod);
  FlatMatrix term = FlatMatrix::identity(x.n(), mod);
  FlatMatrix sum = FlatMatrix::identity(x.n(), mod);
  for (int k = 1; k < cutoff; ++k) {
    term = term.mul(xs);
    int a = val_p(k, p);
    term.divide_exact(p, a, k / pow_i64(p, a));
    sum.add_scaled(term, 1);
  }
  return unflatten(sum, p, target);
}

ScaledMatrix log_truncated(const ScaledMatrix& g) {
  const int target = g.abs_precision();
  if (target < 1) throw PrecisionError("log_truncated: no determined digits");
  PrimeContext ctx(g.p(), target);
  ScaledMatrix y = g - ScaledMatrix::identity(ctx, g.n());
  LatticeValuation v = lattice_valuation(y);
  if (!v.exact) return ScaledMatrix(g.p(), g.n(), 0, target);  // log(I) = 0
  if (v.value < 1)
    throw ConvergenceViolation("log_truncated: requires g in 1 + p*M_n(Z_p)");

  const std::int64_t p = g.p();
  const int val = v.value;
  // Cutoff: least K with k*val - val_p(k) >= target for all k >= K.
  int cutoff = 1;
  for (int k = 1; k <= 4 * target + 4; ++k)
    if (std::int64_t(k) * val - val_p(k, p) < target) cutoff = k + 1;
  int buffer = 0;
  for (int k = 1; k < cutoff; ++k) buffer = std::max(buffer, val_p(k, p));
  const std::int64_t mod = pow_i64(p, target + buffer);

  FlatMatrix ys = flatten(y, mod);
  FlatMatrix pw = FlatMatrix::identity(g.n(), mod);
  FlatMatrix sum{g.n(), mod,
                 std::vector<std::int64_t>(std::size_t(g.n()) * g.n(), 0)};
  for (int k = 1; k < cutoff; ++k) {
    pw = pw.mul(ys);
    FlatMatrix term = pw;
    int a = val_p(k, p);
    term.divide_exact(p, a, k / pow_i64(p, a));
    sum.add_scaled(term, (k % 2 == 1) ? 1 : mod - 1);
  }
  return unflatten(sum, p, target);
}

// ---- unit inverse via adjugate ----

ScaledMatrix matrix_inverse_unit(const ScaledMatrix& g) {
  if (g.scale() != 0)
    throw DomainViolation("matrix_inverse_unit: requires scale 0");
  const int n = g.n();
  const std::int64_t m = g.modulus();

  // Determinant and adjugate by expansion over minors (n is small here).
  // det of the (n-1)x(n-1) minor removing row i / col j, with sign.
  auto minor_det = [&](const std::vector<std::int64_t>& a, int size, int skip_r,
                       int skip_c, auto&& self) -> std::int64_t {
    std::vector<std::int64_t> sub;
    sub.reserve(std::size_t(size - 1) * (size - 1));
    for (int i = 0; i < size; ++i) {
      if (i == skip_r) continue;
      for (int j = 0; j < size; ++j) {
        if (j == skip_c) continue;
        sub.push_back(a[i * size + j]);
      }
    }
    int s = size - 1;
    if (s == 0) return 1;
    if (s == 1) return sub[0];
    std::int64_t det = 0;
    for (int j = 0; j < s; ++j) {
      std::int64_t c = mul_mod(sub[j], self(sub, s, 0, j, self), m);
      det = (j % 2 == 0) ? (det + c) % m : floor_mod(det - c, m);
    }
    return det;
  };

  std::vector<std::int64_t> a(g.raw());
  std::int64_t det = 0;
  if (n == 1) {
    det = a[0];
  } else {
    for (int j = 0; j < n; ++j) {
      std::int64_t c = mul_mod(a[j], minor_det(a, n, 0, j, minor_det), m);
      det = (j % 2 == 0) ? (det + c) % m : floor_mod(det - c, m);
    }
  }
  if (det % g.p() == 0)
    throw DomainViolation("matrix_inverse_unit: determinant is not a unit");
  std::int64_t det_inv = inv_mod(det, m);

  ScaledMatrix out(g.p(), n, 0, g.digits());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::int64_t c =
          n == 1 ? 1 : minor_det(a, n, j, i, minor_det);  // adjugate transposes
      if ((i + j) % 2 == 1) c = floor_mod(-c, m);
      out.set(i, j, mul_mod(c, det_inv, m));
    }
  return out;
}

}  // namespace cuspforms
