#include "subjet/jet_charts.hpp"

#include "linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "subjet/errors.hpp"

namespace subjet {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Mat rows_of(const Mat& a, const std::vector<std::size_t>& rows) {
  Mat out(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = a.row(static_cast<Eigen::Index>(rows[k]));
  return out;
}

void set_rows(Mat& a, const std::vector<std::size_t>& rows, const Mat& block) {
  for (std::size_t k = 0; k < rows.size(); ++k) a.row(static_cast<Eigen::Index>(rows[k])) = block.row(static_cast<Eigen::Index>(k));
}

double relative_min_singular(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  const double largest = s(0);
  if (!(largest > 0.0)) return 0.0;
  return s(s.size() - 1) / largest;
}

// Tangent frame of the jet: columns are d z / d x^a with dx^b/dx^a = delta.
Mat tangent_frame(const SubmanifoldJet& jet) {
  const auto& p = jet.partition;
  Mat frame = Mat::Zero(static_cast<Eigen::Index>(p.m()), static_cast<Eigen::Index>(p.n()));
  set_rows(frame, p.base_indices(), Mat::Identity(static_cast<Eigen::Index>(p.n()), static_cast<Eigen::Index>(p.n())));
  set_rows(frame, p.fiber_indices(), jet.slopes);
  return frame;
}

void check_jet(const SubmanifoldJet& jet) {
  const auto& p = jet.partition;
  if (jet.point.size() != static_cast<Eigen::Index>(p.m())) throw InvalidArgument("jet point has wrong dimension");
  if (jet.slopes.rows() != static_cast<Eigen::Index>(p.m() - p.n()) ||
      jet.slopes.cols() != static_cast<Eigen::Index>(p.n())) {
    throw InvalidArgument("slope matrix must be (m - n) x n");
  }
  if (!jet.slopes.allFinite() || !jet.point.allFinite()) throw InvalidArgument("jet has non-finite entries");
}

}  // namespace

ChartPartition::ChartPartition(std::size_t m, std::vector<std::size_t> base_indices)
    : m_(m), base_(std::move(base_indices)) {
  if (base_.empty() || base_.size() >= m_) {
    throw InvalidArgument("partition needs 1 <= n < m, got n=" + std::to_string(base_.size()) +
                          ", m=" + std::to_string(m_));
  }
  std::vector<bool> used(m_, false);
  for (std::size_t a : base_) {
    if (a >= m_ || used[a]) throw InvalidArgument("partition base indices must be distinct and < m");
    used[a] = true;
  }
  for (std::size_t k = 0; k < m_; ++k) {
    if (!used[k]) fiber_.push_back(k);
  }
}

ChartPartition ChartPartition::leading(std::size_t m, std::size_t n) {
  std::vector<std::size_t> base(n);
  std::iota(base.begin(), base.end(), std::size_t{0});
  return ChartPartition(m, std::move(base));
}

bool DomainBox::contains(const Vec& z) const {
  return (z.array() >= lower.array()).all() && (z.array() <= upper.array()).all();
}

CoordinateMap::CoordinateMap(std::size_t dimension, std::vector<Stage> stages, std::string description)
    : dimension_(dimension), stages_(std::move(stages)), description_(std::move(description)) {}

CoordinateMap CoordinateMap::identity(std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  return CoordinateMap(m, {AffineStage{Mat::Identity(n, n), Vec::Zero(n)}}, "identity");
}

CoordinateMap CoordinateMap::permutation(const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Mat p = Mat::Zero(n, n);
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (perm[k] >= perm.size() || seen[perm[k]]) throw InvalidArgument("not a permutation");
    seen[perm[k]] = true;
    p(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(perm[k])) = 1.0;
  }
  return CoordinateMap(perm.size(), {AffineStage{p, Vec::Zero(n)}}, "permutation");
}

CoordinateMap CoordinateMap::affine(const Mat& linear, const Vec& offset) {
  if (linear.rows() != linear.cols() || linear.rows() != offset.size()) {
    throw InvalidArgument("affine map needs a square matrix and matching offset");
  }
  return CoordinateMap(static_cast<std::size_t>(offset.size()), {AffineStage{linear, offset}}, "affine");
}

CoordinateMap CoordinateMap::lorentz_boost(std::size_t m, double ch, double sh, std::size_t axis) {
  if (axis == 0 || axis >= m) throw InvalidArgument("boost axis must be a spatial coordinate");
  const auto n = static_cast<Eigen::Index>(m);
  const auto ax = static_cast<Eigen::Index>(axis);
  Mat lambda = Mat::Identity(n, n);
  lambda(0, 0) = ch;
  lambda(0, ax) = -sh;
  lambda(ax, 0) = -sh;
  lambda(ax, ax) = ch;
  std::ostringstream desc;
  desc << "lorentz-boost(ch=" << ch << ", sh=" << sh << ", axis=" << axis << ")";
  return CoordinateMap(m, {AffineStage{lambda, Vec::Zero(n)}}, desc.str());
}

CoordinateMap CoordinateMap::polynomial(std::vector<Polynomial> components, std::optional<DomainBox> domain) {
  const std::size_t m = components.size();
  PolynomialStage stage;
  for (const auto& c : components) {
    if (c.dimension() != m) throw InvalidArgument("polynomial map component has wrong dimension");
  }
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < m; ++l) stage.jacobian.push_back(components[k].derivative(l));
  }
  if (domain && (domain->lower.size() != static_cast<Eigen::Index>(m) ||
                 domain->upper.size() != static_cast<Eigen::Index>(m))) {
    throw InvalidArgument("domain box has wrong dimension");
  }
  stage.components = std::move(components);
  stage.domain = std::move(domain);
  return CoordinateMap(m, {std::move(stage)}, "polynomial");
}

Vec CoordinateMap::apply(const Vec& z) const {
  if (z.size() != static_cast<Eigen::Index>(dimension_)) throw InvalidArgument("point has wrong dimension");
  Vec cur = z;
  for (const auto& stage : stages_) {
    cur = std::visit(Overloaded{
                         [&](const AffineStage& s) -> Vec { return s.linear * cur + s.offset; },
                         [&](const PolynomialStage& s) -> Vec {
                           if (s.domain && !s.domain->contains(cur)) {
                             throw DomainError("point lies outside the domain of transition '" + description_ + "'");
                           }
                           Vec out(cur.size());
                           for (std::size_t k = 0; k < s.components.size(); ++k) {
                             out(static_cast<Eigen::Index>(k)) = s.components[k](cur);
                           }
                           return out;
                         },
                     },
                     stage);
  }
  return cur;
}

Mat CoordinateMap::jacobian(const Vec& z) const {
  if (z.size() != static_cast<Eigen::Index>(dimension_)) throw InvalidArgument("point has wrong dimension");
  const auto n = static_cast<Eigen::Index>(dimension_);
  Vec cur = z;
  Mat jac = Mat::Identity(n, n);
  for (const auto& stage : stages_) {
    std::visit(Overloaded{
                   [&](const AffineStage& s) {
                     jac = s.linear * jac;
                     cur = s.linear * cur + s.offset;
                   },
                   [&](const PolynomialStage& s) {
                     if (s.domain && !s.domain->contains(cur)) {
                       throw DomainError("point lies outside the domain of transition '" + description_ + "'");
                     }
                     Mat local(n, n);
                     Vec next(n);
                     for (Eigen::Index k = 0; k < n; ++k) {
                       next(k) = s.components[static_cast<std::size_t>(k)](cur);
                       for (Eigen::Index l = 0; l < n; ++l) {
                         local(k, l) = s.jacobian[static_cast<std::size_t>(k * n + l)](cur);
                       }
                     }
                     jac = local * jac;
                     cur = next;
                   },
               },
               stage);
  }
  return jac;
}

CoordinateMap CoordinateMap::then(const CoordinateMap& next) const {
  if (next.dimension_ != dimension_) throw InvalidArgument("cannot compose maps of different dimension");
  std::vector<Stage> stages = stages_;
  stages.insert(stages.end(), next.stages_.begin(), next.stages_.end());
  return CoordinateMap(dimension_, std::move(stages), description_ + " ; " + next.description_);
}

std::optional<CoordinateMap> CoordinateMap::inverse() const {
  std::vector<Stage> inv;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    const auto* affine = std::get_if<AffineStage>(&*it);
    if (!affine) return std::nullopt;
    Eigen::PartialPivLU<Mat> lu(affine->linear);
    if (!(detail::reciprocal_condition(affine->linear, lu) >= 1.0 / kMaxCondition)) return std::nullopt;
    Mat li = lu.inverse();
    inv.push_back(AffineStage{li, -li * affine->offset});
  }
  return CoordinateMap(dimension_, std::move(inv), "inverse(" + description_ + ")");
}

ChartTransition ChartTransition::then(const ChartTransition& next) const {
  if (!(target == next.source)) throw InvalidArgument("transitions are not composable: chart partitions differ");
  return {source, next.target, map.then(next.map)};
}

std::optional<ChartTransition> ChartTransition::inverse() const {
  auto inv = map.inverse();
  if (!inv) return std::nullopt;
  return ChartTransition{target, source, *inv};
}

SubmanifoldJet transform_jet(const SubmanifoldJet& jet, const ChartTransition& t, double max_condition) {
  check_jet(jet);
  if (!(jet.partition == t.source)) throw InvalidArgument("jet chart does not match the transition's source chart");
  if (t.map.dimension() != jet.partition.m() || t.target.m() != jet.partition.m() ||
      t.target.n() != jet.partition.n()) {
    throw InvalidArgument("transition dimensions do not match the jet");
  }
  const Mat jac = t.map.jacobian(jet.point);
  const Mat image = jac * tangent_frame(jet);
  const Mat M = rows_of(image, t.target.base_indices());
  const Mat numer = rows_of(image, t.target.fiber_indices());
  Eigen::PartialPivLU<Mat> lu(M);
  const double rcond = detail::reciprocal_condition(M, lu);
  if (!(rcond >= 1.0 / max_condition)) {
    std::ostringstream out;
    out << "transition '" << t.description() << "' is singular for this jet (rcond=" << rcond
        << "); the target chart is not admissible";
    throw SingularTransition(out.str());
  }
  // Y' = numer * M^-1  <=>  M^T Y'^T = numer^T
  Mat slopes = Eigen::PartialPivLU<Mat>(M.transpose()).solve(numer.transpose()).transpose();
  return SubmanifoldJet{t.target, t.map.apply(jet.point), std::move(slopes)};
}

bool is_regular(const SectionJet& jet, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("regularity tolerance must be positive");
  return relative_min_singular(jet.velocity) > tol && jet.velocity.rows() >= jet.velocity.cols();
}

SubmanifoldJet section_to_submanifold(const SectionJet& jet, const ChartPartition& partition, double tol) {
  if (jet.velocity.rows() != static_cast<Eigen::Index>(partition.m()) ||
      jet.velocity.cols() != static_cast<Eigen::Index>(partition.n()) ||
      jet.point.size() != static_cast<Eigen::Index>(partition.m())) {
    throw InvalidArgument("section jet shape does not match the partition");
  }
  const Mat base = rows_of(jet.velocity, partition.base_indices());
  const Mat fiber = rows_of(jet.velocity, partition.fiber_indices());
  if (!(relative_min_singular(base) > tol)) {
    throw NonRegularInChart("base block of the velocity matrix is singular in this chart; try another partition");
  }
  Mat slopes = Eigen::PartialPivLU<Mat>(base.transpose()).solve(fiber.transpose()).transpose();
  return SubmanifoldJet{partition, jet.point, std::move(slopes)};
}

SectionJet submanifold_to_sections(const SubmanifoldJet& jet, const Mat& base_velocity, Vec sigma) {
  check_jet(jet);
  const auto& p = jet.partition;
  const auto n = static_cast<Eigen::Index>(p.n());
  if (base_velocity.rows() != n || base_velocity.cols() != n) throw InvalidArgument("base velocity must be n x n");
  if (!base_velocity.allFinite()) throw InvalidArgument("base velocity has non-finite entries");
  Mat velocity(static_cast<Eigen::Index>(p.m()), n);
  set_rows(velocity, p.base_indices(), base_velocity);
  set_rows(velocity, p.fiber_indices(), jet.slopes * base_velocity);
  if (sigma.size() == 0) sigma = Vec::Zero(n);
  return SectionJet{std::move(sigma), jet.point, std::move(velocity)};
}

SectionJet transform_section(const SectionJet& jet, const CoordinateMap& map) {
  return SectionJet{jet.sigma, map.apply(jet.point), map.jacobian(jet.point) * jet.velocity};
}

}  // namespace subjet
