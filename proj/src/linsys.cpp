#include "radomult/linsys.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>

namespace radomult {

LinearSystem::LinearSystem(std::string name, std::vector<std::vector<long long>> matrix, int q)
    : name_(std::move(name)), field_(GaloisField::make(q)), matrix_(std::move(matrix)) {
  if (matrix_.empty()) throw std::invalid_argument("linear system needs at least one equation");
  m_ = static_cast<int>(matrix_.front().size());
  if (m_ == 0) throw std::invalid_argument("linear system needs at least one variable");
  for (const auto& row : matrix_) {
    if (static_cast<int>(row.size()) != m_) throw std::invalid_argument("ragged system matrix");
    std::vector<FieldElement> red;
    FieldElement sum = field_.zero();
    for (long long a : row) {
      const FieldElement e = field_.embed_integer(a);
      // Structural zeros are allowed; a nonzero integer must stay nonzero in GF(q).
      if (a != 0 && e == field_.zero()) {
        throw std::invalid_argument("entry " + std::to_string(a) + " is not coprime to q = " + std::to_string(q));
      }
      red.push_back(e);
      sum = field_.add(sum, e);
    }
    reduced_.push_back(std::move(red));
    invariant_ = (reduced_.size() == 1 || invariant_) && sum == field_.zero();
  }

  // Row reduction for the rank and a kernel basis.
  auto M = reduced_;
  const int r = rows();
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < m_ && row < r; ++col) {
    int sel = -1;
    for (int i = row; i < r; ++i)
      if (M[i][col] != field_.zero()) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(M[row], M[sel]);
    const FieldElement inv = field_.inv(M[row][col]);
    for (auto& v : M[row]) v = field_.mul(v, inv);
    for (int i = 0; i < r; ++i) {
      if (i == row || M[i][col] == field_.zero()) continue;
      const FieldElement f = M[i][col];
      for (int j = 0; j < m_; ++j) M[i][j] = field_.sub(M[i][j], field_.mul(f, M[row][j]));
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (row != r) throw std::invalid_argument("system matrix is not of full rank over GF(" + std::to_string(q) + ")");
  for (int free = 0; free < m_; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    std::vector<FieldElement> v(m_, field_.zero());
    v[free] = field_.one();
    for (int i = 0; i < r; ++i) v[pivot_col[i]] = field_.neg(M[i][free]);
    kernel_.push_back(std::move(v));
  }
}

LinearSystem builtin_system(std::string_view name, int q) {
  std::string lower(name);
  for (auto& ch : lower) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (lower == "schur") return LinearSystem("schur", {{1, 1, -1}}, q);
  if (lower.size() > 2 && lower.ends_with("ap")) {
    const std::string digits = lower.substr(0, lower.size() - 2);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(ch); })) {
      const int k = std::stoi(digits);
      if (k < 3) throw std::invalid_argument("arithmetic progressions need k >= 3");
      std::vector<std::vector<long long>> A(k - 2, std::vector<long long>(k, 0));
      for (int i = 0; i < k - 2; ++i) {
        A[i][i] = 1;
        A[i][i + 1] = -2;
        A[i][i + 2] = 1;
      }
      return LinearSystem(lower, std::move(A), q);
    }
  }
  throw std::invalid_argument("unknown system '" + std::string(name) + "' (expected schur or <k>ap)");
}

LinearSystem read_system(std::istream& in, int q, std::string name) {
  int r = 0, m = 0;
  if (!(in >> r >> m) || r < 1 || m < 1) throw std::runtime_error("malformed system header (expected 'r m')");
  std::vector<std::vector<long long>> A(r, std::vector<long long>(m));
  for (auto& row : A)
    for (auto& v : row)
      if (!(in >> v)) throw std::runtime_error("system matrix is truncated");
  return LinearSystem(std::move(name), std::move(A), q);
}

LinearSystem read_system_file(const std::string& path, int q) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open system file " + path);
  return read_system(in, q, path);
}

LinearSystem resolve_system(const std::string& name_or_path, int q) {
  try {
    return builtin_system(name_or_path, q);
  } catch (const std::invalid_argument&) {
    std::ifstream probe(name_or_path);
    if (!probe) throw;
  }
  return read_system_file(name_or_path, q);
}

int dim_of_system(const LinearSystem& L, int t) {
  if (t < -1) throw std::invalid_argument("t must be at least -1");
  if (t == -1) {
    if (!L.invariant()) throw std::invalid_argument("system " + L.name() + " is not invariant, so t = -1 is not admissible");
    return L.vars() - L.rows() - 1;
  }
  return L.vars() - L.rows() + t;
}

int solution_dim(const VectorSpace& space, std::span<const std::uint32_t> s, int t) {
  std::vector<std::uint32_t> vs;
  if (t >= 0) {
    for (int j = 1; j <= t; ++j) vs.push_back(space.unit(j));
    vs.insert(vs.end(), s.begin(), s.end());
  } else {
    for (std::size_t i = 1; i < s.size(); ++i) vs.push_back(space.sub(s[i], s[0]));
  }
  return space.rank(vs);
}

std::vector<Solution> solutions(const LinearSystem& L, const VectorSpace& space, SolutionKind kind, int t,
                                const std::vector<char>& T) {
  if (space.q() != L.q()) throw std::invalid_argument("solution space and system use different fields");
  const int target_dim = kind == SolutionKind::FullyDimensional ? dim_of_system(L, t) : 0;
  const auto& K = L.kernel();
  const int m = L.vars();
  const int f = static_cast<int>(K.size());
  const std::uint32_t Q = space.size();
  std::vector<Solution> out;
  if (!T.empty() && std::none_of(T.begin(), T.end(), [](char c) { return c != 0; })) return out;

  std::vector<std::uint32_t> u(f, 0);
  Solution s(m);
  while (true) {
    for (int i = 0; i < m; ++i) {
      std::uint32_t v = 0;
      for (int j = 0; j < f; ++j) v = space.add(v, space.scale(K[j][i], u[j]));
      s[i] = v;
    }
    bool keep = true;
    if (!T.empty())
      for (auto x : s)
        if (!T[x]) keep = false;
    if (keep && kind == SolutionKind::Distinct) {
      Solution sorted = s;
      std::sort(sorted.begin(), sorted.end());
      keep = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    }
    if (keep && kind == SolutionKind::FullyDimensional) keep = solution_dim(space, s, t) == target_dim;
    if (keep) out.push_back(s);
    int j = 0;
    while (j < f && ++u[j] == Q) u[j++] = 0;
    if (j == f) break;
  }
  return out;
}

MonoEvaluator::MonoEvaluator(const LinearSystem& L, int t)
    : system_(L), t_(t), d_(dim_of_system(L, t)), space_(L.field(), d_) {
  sols_ = solutions(system_, space_, SolutionKind::FullyDimensional, t_);
}

std::uint64_t MonoEvaluator::mono_count(std::span<const std::uint8_t> colors) const {
  std::uint64_t count = 0;
  for (const auto& s : sols_) {
    const auto c0 = colors[s[0]];
    bool mono = true;
    for (std::size_t i = 1; i < s.size() && mono; ++i) mono = colors[s[i]] == c0;
    count += mono;
  }
  return count;
}

Rational MonoEvaluator::operator()(const Coloring& gamma) const {
  if (gamma.q != space_.q()) throw std::invalid_argument("coloring and system use different fields");
  if (gamma.n < d_) {
    throw std::invalid_argument("coloring of dimension " + std::to_string(gamma.n) + " is below dim_t(L) = " +
                                std::to_string(d_));
  }
  const auto total = static_cast<unsigned long>(sols_.size());
  if (gamma.n == d_) return ratio(static_cast<unsigned long>(mono_count(gamma.colors)), total);
  // Every fully-dimensional solution spans a unique t-fixed d-dimensional subspace.
  const VectorSpace big(space_.field(), gamma.n);
  const auto catalog = SubspaceCatalog::build(big, t_, d_);
  std::vector<std::uint8_t> sub(space_.size());
  BigInt mono = 0;
  for (const auto& img : catalog.images) {
    for (std::size_t x = 0; x < img.size(); ++x) sub[x] = gamma.colors[img[x]];
    mono += static_cast<unsigned long>(mono_count(sub));
  }
  return ratio(mono, BigInt(static_cast<unsigned long>(catalog.size())) * total);
}

Rational mono_fraction(const LinearSystem& L, const Coloring& gamma, int t) { return MonoEvaluator(L, t)(gamma); }

}  // namespace radomult
