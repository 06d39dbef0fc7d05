#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radomult/flagcalc.hpp"
#include "radomult/linsys.hpp"

namespace radomult {

/// w * [[ (sum_F v_F F)^2 ]] with flags keyed by their canonical colors.
struct SquareTerm {
  Rational weight;
  std::map<std::vector<std::uint8_t>, Rational> coeffs;

  friend bool operator==(const SquareTerm&, const SquareTerm&) = default;
};

struct CertificateBlock {
  FlagType type;
  int flag_dim = 0;
  std::vector<SquareTerm> terms;

  friend bool operator==(const CertificateBlock&, const CertificateBlock&) = default;
};

/// lambda(H) - bound >= sum of the square terms, coefficient-wise over the
/// base classes H of Gamma^{t_lambda}(N). With `root` set (t_lambda = 0) only
/// the classes whose origin has that color are checked; the parameter is
/// invariant under permuting colors, so one root color suffices.
struct SosCertificate {
  int q = 2;
  int c = 2;
  std::string system;
  int t_lambda = -1;
  int n_lambda = 1;
  int N = 2;
  Rational bound = 0;
  std::optional<int> root;
  std::vector<CertificateBlock> blocks;

  friend bool operator==(const SosCertificate&, const SosCertificate&) = default;
};

struct ClassReport {
  std::size_t index = 0;
  std::vector<std::uint8_t> colors;
  Rational lambda;
  Rational lhs;
  Rational rhs;
  Rational slack;
};

struct VerificationReport {
  Rational bound;
  bool pass = false;
  std::vector<ClassReport> classes;
  std::vector<std::size_t> tight;    // positions in `classes` with slack 0
  std::vector<std::size_t> failing;  // positions in `classes` with slack < 0
  Rational min_slack;
};

struct VerifyOptions {
  int threads = 0;
  bool serial = false;  // plain loop, kept as the reference for the parallel path
};

/// Thrown when a certificate is malformed or does not match the family.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks weights, flag canonicity, types and flag dimensions against the
/// parameters. Throws CertificateError.
void validate(const SosCertificate& cert);

VerificationReport verify(const SosCertificate& cert, const ColoringFamily& family, const VerifyOptions& options = {});

/// Exact value of w [[(v.F)^2]] at class h, computed through a pair-density engine.
Rational rhs_coefficient(const SquareTerm& term, const CertificateBlock& block, const PairDensityEngine& engine,
                         std::size_t h);

/// Text format, '#' starts a comment:
///   certificate
///   q 3 / c 3 / system 3ap / t_lambda -1 / n_lambda 1 / N 2 / bound 1/27 / [root 1]
///   block <t> <type colors...>
///   flag_dim <k>
///   term <weight>
///   flag <colors...> = <coefficient>
///   end
SosCertificate read_certificate(std::istream& in);
SosCertificate read_certificate_file(const std::string& path);
void write_certificate(std::ostream& out, const SosCertificate& cert);
void write_certificate_file(const std::string& path, const SosCertificate& cert);

/// Flag dimension used for a type dimension t at base dimension N.
int default_flag_dim(int t, int N);

}  // namespace radomult
