#include "radomult/certificate.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "radomult/parallel.hpp"

namespace radomult {

int default_flag_dim(int t, int N) { return t < 0 ? N - 1 : (N - t) / 2 + t; }

void validate(const SosCertificate& cert) {
  if (!is_supported_field_order(cert.q)) throw CertificateError("unsupported q");
  if (cert.c < 1) throw CertificateError("color count must be positive");
  if (cert.t_lambda != -1 && cert.t_lambda != 0) throw CertificateError("t_lambda must be -1 or 0");
  if (cert.root && (cert.t_lambda != 0 || *cert.root < 1 || *cert.root > cert.c)) {
    throw CertificateError("a root color is only meaningful for t_lambda = 0 and must be a valid color");
  }
  const auto L = resolve_system(cert.system, cert.q);
  if (natural_fixedness(L) != cert.t_lambda) {
    throw CertificateError("t_lambda does not match the system (" + std::to_string(natural_fixedness(L)) + ")");
  }
  if (dim_of_system(L, cert.t_lambda) != cert.n_lambda) {
    throw CertificateError("n_lambda does not match dim_t(L) = " + std::to_string(dim_of_system(L, cert.t_lambda)));
  }
  if (cert.N < cert.n_lambda) throw CertificateError("base dimension N is below n_lambda");
  for (const auto& b : cert.blocks) {
    const int t = b.type.t;
    if (t < cert.t_lambda || t > cert.N) throw CertificateError("type dimension out of range");
    const std::size_t type_len = t < 0 ? 0 : static_cast<std::size_t>(std::pow(cert.q, t));
    if (b.type.colors.size() != type_len) throw CertificateError("type has the wrong number of colors");
    const int kmax = t < 0 ? cert.N - 1 : (cert.N - t) / 2 + t;
    if (b.flag_dim < std::max(t, 0) || b.flag_dim > kmax) {
      throw CertificateError("flag dimension " + std::to_string(b.flag_dim) + " outside " + std::to_string(std::max(t, 0)) +
                             ".." + std::to_string(kmax));
    }
    const std::size_t flag_len = static_cast<std::size_t>(std::pow(cert.q, b.flag_dim));
    for (const auto& term : b.terms) {
      if (term.weight < 0) throw CertificateError("negative weight " + to_string(term.weight));
      for (const auto& [colors, v] : term.coeffs) {
        if (colors.size() != flag_len) throw CertificateError("flag has the wrong number of colors");
        const Coloring f(cert.q, b.flag_dim, cert.c, colors);
        if (type_of(colors, cert.q, t) != b.type) throw CertificateError("flag does not extend the block type");
        if (canonicalize(f, t).colors != colors) throw CertificateError("flag key is not canonical");
      }
    }
  }
}

Rational rhs_coefficient(const SquareTerm& term, const CertificateBlock& block, const PairDensityEngine& engine,
                         std::size_t h) {
  const auto blk = engine.block_of(block.type);
  if (!blk) return 0;
  const std::size_t size = engine.blocks()[*blk].flags.size();
  std::vector<Rational> v(size, Rational(0));
  for (const auto& [colors, coef] : term.coeffs) {
    const auto loc = engine.locate(colors);
    if (!loc || loc->first != *blk) throw CertificateError("flag not found in its type block");
    v[loc->second] = coef;
  }
  Rational sum = 0;
  for (const auto& pc : engine.counts(h))
    if (pc.block == *blk) sum += v[pc.a] * v[pc.b] * static_cast<unsigned long>(pc.count);
  return term.weight * sum / engine.denominator();
}

namespace {

// Per-term dense coefficient vectors aligned with an engine block.
struct PreparedTerm {
  const PairDensityEngine* engine;
  std::size_t block;
  Rational weight;
  std::vector<Rational> v;
};

}  // namespace

VerificationReport verify(const SosCertificate& cert, const ColoringFamily& family, const VerifyOptions& options) {
  validate(cert);
  if (family.q != cert.q || family.c != cert.c || family.t != cert.t_lambda || family.n != cert.N) {
    throw CertificateError("family does not match the certificate parameters");
  }
  const auto L = resolve_system(cert.system, cert.q);
  const MonoEvaluator lambda(L, cert.t_lambda);

  std::map<std::pair<int, int>, std::unique_ptr<PairDensityEngine>> engines;
  std::vector<PreparedTerm> terms;
  for (const auto& b : cert.blocks) {
    auto& eng = engines[{b.type.t, b.flag_dim}];
    if (!eng) eng = std::make_unique<PairDensityEngine>(family, b.type.t, b.flag_dim);
    const auto blk = eng->block_of(b.type);
    if (!blk) continue;  // a type that no class can carry contributes nothing
    const std::size_t size = eng->blocks()[*blk].flags.size();
    for (const auto& term : b.terms) {
      PreparedTerm p{eng.get(), *blk, term.weight, std::vector<Rational>(size, Rational(0))};
      for (const auto& [colors, coef] : term.coeffs) {
        const auto loc = eng->locate(colors);
        if (!loc || loc->first != *blk) throw CertificateError("flag not found in its type block");
        p.v[loc->second] = coef;
      }
      terms.push_back(std::move(p));
    }
  }

  std::vector<std::size_t> selected;
  for (std::size_t h = 0; h < family.size(); ++h) {
    if (cert.root && family.representative(h).colors[0] != *cert.root) continue;
    selected.push_back(h);
  }

  VerificationReport report;
  report.bound = cert.bound;
  report.classes.resize(selected.size());
  auto evaluate = [&](std::size_t i) {
    const std::size_t h = selected[i];
    ClassReport r;
    r.index = h;
    r.colors = family.representative(h).colors;
    r.lambda = lambda(Coloring(family.q, family.n, family.c, r.colors));
    r.lhs = r.lambda - cert.bound;
    r.rhs = 0;
    std::map<const PairDensityEngine*, std::vector<PairCount>> counts;
    for (const auto& p : terms) {
      auto it = counts.find(p.engine);
      if (it == counts.end()) it = counts.emplace(p.engine, p.engine->counts(h)).first;
      Rational s = 0;
      for (const auto& pc : it->second)
        if (pc.block == p.block && p.v[pc.a] != 0 && p.v[pc.b] != 0)
          s += p.v[pc.a] * p.v[pc.b] * static_cast<unsigned long>(pc.count);
      if (s != 0) r.rhs += p.weight * s / p.engine->denominator();
    }
    r.slack = r.lhs - r.rhs;
    report.classes[i] = std::move(r);
  };
  if (options.serial) {
    for (std::size_t i = 0; i < selected.size(); ++i) evaluate(i);
  } else {
    ThreadScope scope(options.threads);
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(selected.size()); ++i) evaluate(static_cast<std::size_t>(i));
  }

  report.pass = true;
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& r = report.classes[i];
    if (i == 0 || r.slack < report.min_slack) report.min_slack = r.slack;
    if (r.slack == 0) report.tight.push_back(i);
    if (r.slack < 0) {
      report.failing.push_back(i);
      report.pass = false;
    }
  }
  return report;
}

namespace {

std::vector<std::uint8_t> parse_colors(std::istringstream& in, std::size_t count, int c, const std::string& what) {
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < count; ++i) {
    int v = 0;
    if (!(in >> v)) throw CertificateError(what + ": expected " + std::to_string(count) + " colors");
    if (v < 1 || v > c) throw CertificateError(what + ": color " + std::to_string(v) + " out of range");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

std::size_t ipow_size(int q, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(q);
  return r;
}

Rational parse_rational_field(const std::string& s, const std::string& what) {
  try {
    return parse_rational(s);
  } catch (const std::exception& e) {
    throw CertificateError(what + ": " + e.what());
  }
}

}  // namespace

SosCertificate read_certificate(std::istream& in) {
  SosCertificate cert;
  std::string line;
  bool header_seen = false;
  bool have[7] = {};
  CertificateBlock* block = nullptr;
  SquareTerm* term = nullptr;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw CertificateError("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (!header_seen) {
      if (key != "certificate") fail("expected 'certificate'");
      header_seen = true;
      continue;
    }
    std::string value;
    if (key == "q" || key == "c" || key == "t_lambda" || key == "n_lambda" || key == "N" || key == "root") {
      long v = 0;
      if (!(ls >> v)) fail("expected an integer after " + key);
      if (key == "q") cert.q = static_cast<int>(v), have[0] = true;
      if (key == "c") cert.c = static_cast<int>(v), have[1] = true;
      if (key == "t_lambda") cert.t_lambda = static_cast<int>(v), have[2] = true;
      if (key == "n_lambda") cert.n_lambda = static_cast<int>(v), have[3] = true;
      if (key == "N") cert.N = static_cast<int>(v), have[4] = true;
      if (key == "root") cert.root = static_cast<int>(v);
    } else if (key == "system") {
      if (!(ls >> cert.system)) fail("expected a system name");
      have[5] = true;
    } else if (key == "bound") {
      if (!(ls >> value)) fail("expected a bound");
      cert.bound = parse_rational_field(value, "bound");
      have[6] = true;
    } else if (key == "block") {
      for (bool h : have)
        if (!h) fail("header incomplete before the first block");
      int t = 0;
      if (!(ls >> t) || t < -1) fail("expected a type dimension");
      CertificateBlock b;
      b.type.t = t;
      if (t >= 0) b.type.colors = parse_colors(ls, ipow_size(cert.q, t), cert.c, "type");
      cert.blocks.push_back(std::move(b));
      block = &cert.blocks.back();
      term = nullptr;
    } else if (key == "flag_dim") {
      if (!block) fail("flag_dim outside a block");
      if (!(ls >> block->flag_dim)) fail("expected a flag dimension");
    } else if (key == "term") {
      if (!block) fail("term outside a block");
      if (!(ls >> value)) fail("expected a weight");
      const Rational w = parse_rational_field(value, "weight");
      if (w < 0) fail("negative weight " + value);
      block->terms.push_back(SquareTerm{w, {}});
      term = &block->terms.back();
    } else if (key == "flag") {
      if (!term) fail("flag outside a term");
      auto colors = parse_colors(ls, ipow_size(cert.q, block->flag_dim), cert.c, "flag");
      std::string eq;
      if (!(ls >> eq) || eq != "=" || !(ls >> value)) fail("expected '= <coefficient>'");
      if (!term->coeffs.emplace(std::move(colors), parse_rational_field(value, "coefficient")).second) {
        fail("duplicate flag in a term");
      }
    } else if (key == "end") {
      block = nullptr;
      term = nullptr;
    } else {
      fail("unknown keyword '" + key + "'");
    }
    std::string rest;
    if (ls >> rest) fail("trailing text '" + rest + "'");
  }
  if (!header_seen) throw CertificateError("empty certificate");
  for (bool h : have)
    if (!h) throw CertificateError("certificate header is incomplete");
  return cert;
}

SosCertificate read_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CertificateError("cannot open certificate " + path);
  return read_certificate(in);
}

void write_certificate(std::ostream& out, const SosCertificate& cert) {
  auto colors = [&](const std::vector<std::uint8_t>& cs) {
    for (auto v : cs) out << ' ' << static_cast<int>(v);
  };
  out << "certificate\n";
  out << "q " << cert.q << "\nc " << cert.c << "\nsystem " << cert.system << "\nt_lambda " << cert.t_lambda
      << "\nn_lambda " << cert.n_lambda << "\nN " << cert.N << "\nbound " << to_string(cert.bound) << '\n';
  if (cert.root) out << "root " << *cert.root << '\n';
  for (const auto& b : cert.blocks) {
    out << "\nblock " << b.type.t;
    colors(b.type.colors);
    out << "\nflag_dim " << b.flag_dim << '\n';
    for (const auto& term : b.terms) {
      out << "term " << to_string(term.weight) << '\n';
      for (const auto& [cs, v] : term.coeffs) {
        out << "flag";
        colors(cs);
        out << " = " << to_string(v) << '\n';
      }
    }
    out << "end\n";
  }
}

void write_certificate_file(const std::string& path, const SosCertificate& cert) {
  std::ofstream out(path);
  if (!out) throw CertificateError("cannot write certificate " + path);
  write_certificate(out, cert);
}

}  // namespace radomult
