#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radomult/coloring.hpp"

namespace radomult {

/// A homogeneous system A s = 0 with an integer r x m matrix, read over GF(q)
/// through the characteristic map Z -> GF(q).
class LinearSystem {
 public:
  /// Throws std::invalid_argument if some nonzero entry vanishes in GF(q) or A is
  /// not of full row rank over GF(q).
  LinearSystem(std::string name, std::vector<std::vector<long long>> matrix, int q);

  const std::string& name() const { return name_; }
  int q() const { return field_.order(); }
  const GaloisField& field() const { return field_; }
  int rows() const { return static_cast<int>(matrix_.size()); }
  int vars() const { return m_; }
  const std::vector<std::vector<long long>>& matrix() const { return matrix_; }
  const std::vector<std::vector<FieldElement>>& reduced() const { return reduced_; }

  /// Every row sums to zero in GF(q), so solutions are closed under adding
  /// a common vector to all entries.
  bool invariant() const { return invariant_; }

  /// Kernel basis over GF(q): m x (m - r) matrix, column-major (kernel()[j][i]
  /// is entry i of basis vector j).
  const std::vector<std::vector<FieldElement>>& kernel() const { return kernel_; }

 private:
  std::string name_;
  GaloisField field_;
  int m_ = 0;
  std::vector<std::vector<long long>> matrix_;
  std::vector<std::vector<FieldElement>> reduced_;
  std::vector<std::vector<FieldElement>> kernel_;
  bool invariant_ = false;
};

/// "schur", or "kap" forms such as "3ap", "4ap", "5ap".
LinearSystem builtin_system(std::string_view name, int q);

/// Text format: "r m" then r rows of m integers.
LinearSystem read_system(std::istream& in, int q, std::string name = "custom");
LinearSystem read_system_file(const std::string& path, int q);

/// Resolves a built-in name or a path to a system file.
LinearSystem resolve_system(const std::string& name_or_path, int q);

/// dim_t(L): m - r + t for t >= 0, m - r - 1 for t = -1 (invariant systems only).
int dim_of_system(const LinearSystem& L, int t);

/// -1 for invariant systems, 0 otherwise.
inline int natural_fixedness(const LinearSystem& L) { return L.invariant() ? -1 : 0; }

enum class SolutionKind { All, Distinct, FullyDimensional };

using Solution = std::vector<std::uint32_t>;

/// dim_t of a tuple of points: linear span rank with e_1..e_t adjoined for
/// t >= 0, affine span dimension for t = -1.
int solution_dim(const VectorSpace& space, std::span<const std::uint32_t> s, int t);

/// Solutions with all entries in T (the whole space when T is empty).
std::vector<Solution> solutions(const LinearSystem& L, const VectorSpace& space, SolutionKind kind, int t = 0,
                                const std::vector<char>& T = {});

/// The fully-dimensional solutions of L in F_q^d with d = dim_t(L), on which
/// the monochromatic fraction of any coloring is evaluated.
class MonoEvaluator {
 public:
  MonoEvaluator(const LinearSystem& L, int t);

  const LinearSystem& system() const { return system_; }
  int t() const { return t_; }
  int base_dim() const { return d_; }
  const VectorSpace& base_space() const { return space_; }
  const std::vector<Solution>& base_solutions() const { return sols_; }

  /// lambda(gamma) = sum_i s^t_L(gamma^{(i)}); gamma of dimension >= d.
  Rational operator()(const Coloring& gamma) const;

  /// Monochromatic count on a coloring of F_q^d, out of base_solutions().size().
  std::uint64_t mono_count(std::span<const std::uint8_t> colors) const;

 private:
  LinearSystem system_;
  int t_;
  int d_;
  VectorSpace space_;
  std::vector<Solution> sols_;
};

Rational mono_fraction(const LinearSystem& L, const Coloring& gamma, int t);

}  // namespace radomult
