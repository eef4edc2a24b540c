#pragma once

// Finite models of locally constant, compactly supported functions on
// coordinate subspaces of n x n matrices over Q_p.
//
// A LatticeWindow (V, a, b) models functions supported in p^a * L_V and
// invariant under translation by p^b * L_V, where L_V is the span of the
// coordinates V over Z_p.  Such a function is a finite table on the quotient
// (p^a L_V)/(p^b L_V), whose points are encoded as mixed-radix integer keys:
// one digit value in [0, p^(b-a)) per coordinate, in the order coords() lists
// them.  Values live in the exact cyclotomic ring, so transforms and
// integrals below are finite sums whose vanishing is decided exactly.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cuspforms/cyclotomic.hpp"
#include "cuspforms/padic.hpp"

namespace cuspforms {

struct Coord {
  int i = 0;
  int j = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

using CoordList = std::vector<Coord>;

// All n^2 coordinates in row-major order.
CoordList full_coords(int n);
// Position of c in coords, or -1.
int coord_index(const CoordList& coords, Coord c);
// True when every coordinate of sub appears in coords.
bool coords_subset(const CoordList& sub, const CoordList& coords);

class LatticeWindow {
 public:
  // Validates b >= a and that the point count p^((b-a)*|coords|) fits in
  // 62 bits (keys are int64).  Coordinates keep the given order.
  LatticeWindow(std::int64_t p, int n, CoordList coords, int a, int b);

  std::int64_t p() const { return p_; }
  int n() const { return n_; }
  const CoordList& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  int support_scale() const { return a_; }
  int invariance_scale() const { return b_; }
  int depth() const { return b_ - a_; }
  std::int64_t radix() const { return radix_; }  // p^depth
  std::int64_t point_count() const { return count_; }

  bool operator==(const LatticeWindow& o) const;

  // ---- key codec ----
  // key = sum_c value_c * radix^c over coordinate positions c.
  std::vector<std::int64_t> values_of_key(std::int64_t key) const;
  std::int64_t key_of_values(const std::vector<std::int64_t>& values) const;
  // Coordinate-wise sum / negation mod radix (translation inside the window
  // and the point -X).
  std::int64_t add_keys(std::int64_t k1, std::int64_t k2) const;
  std::int64_t negate_key(std::int64_t k) const;

  // The exact coset representative sum_c p^a * value_c * E_c, presented with
  // at least `digits` residue digits (>= depth(); the representative is an
  // exact matrix, so extra digits are exact zeros).
  ScaledMatrix representative(std::int64_t key, int digits) const;
  ScaledMatrix representative(std::int64_t key) const;

  // Classifies X against the window.  Returns the key of X's coset when X
  // lies in p^a L_V + p^b L (coordinates off V congruent to 0 mod p^b), and
  // nullopt when X is certifiably outside (an off-V coordinate nonzero mod
  // p^b, or an on-V coordinate with valuation < a).  Throws PrecisionError
  // unless X is determined mod p^b (abs_precision >= b), since otherwise the
  // coset is not resolved.
  std::optional<std::int64_t> key_of(const ScaledMatrix& X) const;

  // Companion windows: the Fourier-dual window (-b, -a) on the same
  // coordinates; the window shifted by a scale offset (a+k, b+k); the
  // restriction to a coordinate subset (same scales).
  LatticeWindow dual() const;
  LatticeWindow shifted(int k) const;
  LatticeWindow restricted(const CoordList& sub) const;

 private:
  std::int64_t p_;
  int n_;
  CoordList coords_;
  int a_;
  int b_;
  std::int64_t radix_;
  std::int64_t count_;
};

// A finitely supported table of exact cyclotomic values on a window's
// points; absent keys are zero.  Entries are held in key order, so all
// iteration (and hence every report and serialization) is deterministic.
class SchwartzFunction {
 public:
  explicit SchwartzFunction(LatticeWindow window);

  static SchwartzFunction delta(const LatticeWindow& w, std::int64_t key,
                                Cyclotomic value);
  // Constant 1 on every window point: the indicator of p^a L_V.
  static SchwartzFunction indicator(const LatticeWindow& w);

  const LatticeWindow& window() const { return window_; }
  const std::map<std::int64_t, Cyclotomic>& entries() const { return v_; }

  // Stores value at key (erases the entry when value is exactly zero).
  void set(std::int64_t key, Cyclotomic value);
  Cyclotomic value_at_key(std::int64_t key) const;

  bool is_zero() const { return v_.empty(); }
  std::int64_t support_size() const {
    return static_cast<std::int64_t>(v_.size());
  }

  // Value of the extension of the table by zero: 0 for X certifiably outside
  // the window (see LatticeWindow::key_of), the stored value otherwise.
  // Throws PrecisionError when X cannot be classified.
  Cyclotomic evaluate(const ScaledMatrix& X) const;

  // Same window (including coordinate order) and same table.
  bool operator==(const SchwartzFunction& o) const;

 private:
  LatticeWindow window_;
  std::map<std::int64_t, Cyclotomic> v_;
};

// phi_lambda(X) = phi(lambda^{-1} X) for lambda != 0: the table transported
// to the window shifted by val(lambda), each coordinate digit multiplied by
// the unit part of lambda.  The support is exactly lambda * Supp(phi).
// Requires lambda determined to depth() digits at least.
SchwartzFunction scale_function(const SchwartzFunction& phi,
                                const ScaledResidue& lambda);

// Fourier transform over the full matrix space with respect to the pairing
// (X, Y) -> psi(tr(XY)), psi the additive character of conductor Z_p, with
// Haar measure vol(M_n(Z_p)) = 1:
//   FT(phi)(Y) = p^(-b n^2) * sum_{X in window} phi(X) psi(tr(XY))
// on the dual window (-b, -a).  With these normalizations applying the
// transform twice returns X -> phi(-X) with no constant.  Requires the
// window's coordinates to be all of gl_n.
//
// fourier_transform is the defining double sum; fourier_separable computes
// the identical output as n^2 one-dimensional size-p^d transforms along
// matrix coordinates (tr(XY) = sum X_ij Y_ji splits the kernel across the
// coordinate pairing (i,j) <-> (j,i)), at cost O(N p^d n^2) instead of
// O(N * |supp|), N = p^(d n^2).
SchwartzFunction fourier_transform(const SchwartzFunction& phi);
SchwartzFunction fourier_separable(const SchwartzFunction& phi);

// Integral of phi over the affine slice X + span(direction):
//   p^(-b |direction|) * sum_{N in (p^a L_dir)/(p^b L_dir)} phi(X + N),
// correct for every X (summands vanish off the support window).  The
// direction coordinates must be a subset of phi's window coordinates.
Cyclotomic integrate_affine_slice(const SchwartzFunction& phi,
                                  const CoordList& direction,
                                  const ScaledMatrix& X);

}  // namespace cuspforms
