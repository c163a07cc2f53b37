#include "subjet/sampling.hpp"

#include <array>

namespace subjet {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

constexpr int kMaxRejections = 10000;

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index) : engine_(make_engine(seed, index)) {}

double SampleStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Vec SampleStream::uniform_vector(std::size_t n, double lo, double hi) {
  Vec v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = uniform(lo, hi);
  return v;
}

Polynomial random_polynomial(SampleStream& rng, std::size_t dimension, double scale, unsigned max_degree) {
  Polynomial p(dimension);
  p.add_term(rng.uniform(-scale, scale), Polynomial::Exponents(dimension, 0));
  for (unsigned deg = 1; deg <= max_degree; ++deg) {
    // Two random monomials per degree.
    for (int t = 0; t < 2; ++t) {
      Polynomial::Exponents e(dimension, 0);
      for (unsigned k = 0; k < deg; ++k) {
        e[std::uniform_int_distribution<std::size_t>(0, dimension - 1)(rng.engine())] += 1;
      }
      p.add_term(rng.uniform(-scale, scale), e);
    }
  }
  return p;
}

SymmetricTensorField random_tensor_field(SampleStream& rng, const SymmetricTensorField& base, double scale,
                                         unsigned max_degree) {
  SymmetricTensorField g = base;
  const std::size_t m = base.dimension();
  // Visit every sorted index tuple once.
  SymmetricTensorField::Indices idx(base.degree(), 0);
  while (true) {
    g.add(idx, random_polynomial(rng, m, scale, max_degree));
    std::size_t k = idx.size();
    while (k > 0 && idx[k - 1] == m - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < idx.size(); ++j) idx[j] = idx[k - 1];
  }
  return g;
}

OneFormField random_one_form(SampleStream& rng, std::size_t dimension, double scale, unsigned max_degree) {
  std::vector<Polynomial> c;
  for (std::size_t mu = 0; mu < dimension; ++mu) c.push_back(random_polynomial(rng, dimension, scale, max_degree));
  return OneFormField(std::move(c));
}

TrajectoryState random_state(SampleStream& rng, const RelativisticLagrangian& L, const StateBox& box) {
  const std::size_t m = L.dimension();
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    TrajectoryState s;
    s.tau = 0.0;
    s.q = rng.uniform_vector(m, box.q_lo, box.q_hi);
    s.v = rng.uniform_vector(m, box.vi_lo, box.vi_hi);
    s.v(0) = rng.uniform(box.v0_lo, box.v0_hi);
    if (eval_G(L.G(), s.q, s.v) > box.min_G) return s;
  }
  throw InvalidArgument("could not sample a state with G > min_G; the sampling box misses the domain of G");
}

WorldsheetJet random_worldsheet_jet(SampleStream& rng, const FlatTargetMetric& eta, double min_det) {
  const std::size_t m = eta.dimension();
  const auto n = static_cast<Eigen::Index>(m);
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    WorldsheetJet j;
    j.z = rng.uniform_vector(m, -1.0, 1.0);
    j.first = Mat(n, 2);
    for (Eigen::Index a = 0; a < n; ++a) {
      j.first(a, 0) = rng.uniform(-1.0, 1.0);
      j.first(a, 1) = rng.uniform(-1.0, 1.0);
    }
    const Eigen::Matrix2d h = induced_metric(eta, j.first);
    if (!(static_cast<double>(eta.signature_factor()) * h.determinant() > min_det)) continue;
    Mat z00(n, 1), z01(n, 1), z11(n, 1);
    for (Eigen::Index a = 0; a < n; ++a) {
      z00(a, 0) = rng.uniform(-1.0, 1.0);
      z01(a, 0) = rng.uniform(-1.0, 1.0);
      z11(a, 0) = rng.uniform(-1.0, 1.0);
    }
    j.second[0] = Mat(n, 2);
    j.second[1] = Mat(n, 2);
    j.second[0] << z00, z01;
    j.second[1] << z01, z11;
    return j;
  }
  throw InvalidArgument("could not sample a non-degenerate worldsheet jet");
}

}  // namespace subjet
