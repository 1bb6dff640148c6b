#include <gtest/gtest.h>

#include <cmath>

#include "warpfield/errors.hpp"
#include "warpfield/geometry.hpp"
#include "warpfield/geometry_json.hpp"

using namespace warpfield;
using namespace warpfield::geometry;

namespace {

SpacetimePoint mk(double t, double x, double y = 0, double z = 0) { return SpacetimePoint::minkowski({t, x, y, z}); }

Wedge translated_w0(const Vector4& y) { return Wedge::minkowski(Matrix4::Identity(), y); }

}  // namespace

TEST(Causal, MinkowskiExamples) {
  EXPECT_EQ(causal_relation(mk(0, 0), mk(0, 1)), CausalRelation::spacelike);
  EXPECT_EQ(causal_relation(mk(2, 1), mk(0, 0)), CausalRelation::timelike);
  EXPECT_EQ(causal_relation(mk(1, 1), mk(0, 0)), CausalRelation::null);
}

TEST(Causal, DesitterPair) {
  Vector5 a = Vector5::Zero(), b = Vector5::Zero();
  a[1] = 1;
  b[2] = 1;
  const auto x = SpacetimePoint::desitter(a), y = SpacetimePoint::desitter(b);
  EXPECT_DOUBLE_EQ(interval(x, y), -2.0);
  EXPECT_EQ(causal_relation(x, y), CausalRelation::spacelike);
}

TEST(Causal, MixedBackendsAreStructural) {
  Vector5 a = Vector5::Zero();
  a[1] = 1;
  EXPECT_THROW(causal_relation(mk(0, 0), SpacetimePoint::desitter(a)), StructuralError);
}

TEST(Causal, OffHyperboloidRejected) {
  EXPECT_THROW(SpacetimePoint::desitter(Vector5::Zero()), PreconditionError);
}

TEST(Membership, ReferenceWedge) {
  const auto W = Wedge::minkowski_reference();
  EXPECT_TRUE(wedge_membership(W, mk(0, 1)));
  EXPECT_FALSE(wedge_membership(W, mk(1, 0)));
  EXPECT_TRUE(wedge_membership(translated_w0({0, 1, 0, 0}), mk(0, 1.5)));
  EXPECT_FALSE(wedge_membership(translated_w0({0, 1, 0, 0}), mk(0, 0.5)));
}

TEST(Complement, ReferenceWedgeIsLeftWedge) {
  const auto C = causal_complement(Wedge::minkowski_reference());
  EXPECT_TRUE(wedge_membership(C, mk(0.5, -1)));
  EXPECT_FALSE(wedge_membership(C, mk(0, 1)));
  EXPECT_FALSE(wedge_membership(C, mk(2, -1)));
}

TEST(Complement, InvolutionAllBackends) {
  const auto chart = FRWChart::power(1.0, 0.5);
  const std::vector<Wedge> ws{
      Wedge::minkowski(rotation({0.3, -0.2, 0.9}) * boost_x1(0.7), {0.1, 0.2, -0.3, 0.4}),
      Wedge::desitter(desitter_reference_boost(0.3)),
      Wedge::frw(chart, KillingPair{Backend::frw, {0, 0, 1, 0}, {0, 0.2, 0, 1}}, {1.5, 0.1, 0, 0})};
  for (const auto& w : ws) EXPECT_LT(causal_complement(causal_complement(w)).canonical().distance(w.canonical()), 1e-15);
}

TEST(Complement, DesitterReferenceUsesReflection) {
  const auto C = causal_complement(Wedge::desitter_reference());
  Vector5 x = Vector5::Zero();
  x[0] = 0.2;
  x[1] = -std::sqrt(1.0 + 0.04);
  EXPECT_TRUE(wedge_membership(C, SpacetimePoint::desitter(x)));
  x[1] = -x[1];
  EXPECT_FALSE(wedge_membership(C, SpacetimePoint::desitter(x)));
}

TEST(Inclusion, TranslatedReferenceWedge) {
  const auto W0 = Wedge::minkowski_reference();
  EXPECT_EQ(wedge_inclusion(translated_w0({0, 1, 0, 0}), W0), Inclusion::proper_subset);
  EXPECT_EQ(wedge_inclusion(W0, translated_w0({0, 0, 0.5, -2})), Inclusion::equal);
}

TEST(Inclusion, RotatedWedgeIncomparable) {
  const auto W0 = Wedge::minkowski_reference();
  const auto Wr = Wedge::minkowski(rotation({0, 0, M_PI / 4}), Vector4::Zero());
  EXPECT_EQ(wedge_inclusion(W0, Wr), Inclusion::incomparable);
  const auto e = sample_relation(W0, Wr, 4000);
  EXPECT_GT(e.w1_not_w2, 0u);
  EXPECT_GT(e.w2_not_w1, 0u);
}

TEST(Inclusion, ComplementSubset) {
  const auto W0 = Wedge::minkowski_reference();
  // Left wedge shifted further left: {x1 < -1 - |x0|}.
  const auto inside = Wedge::minkowski(rotation({0, 0, M_PI}), {0, -1, 0, 0});
  EXPECT_EQ(wedge_inclusion(inside, causal_complement(W0)), Inclusion::proper_subset);
  EXPECT_EQ(wedge_inclusion(inside, W0), Inclusion::complement_subset);
}

TEST(Inclusion, DesitterNestedPairIsEqual) {
  const auto w1 = Wedge::desitter_reference();
  const auto w2 = Wedge::desitter(desitter_reference_boost(0.4));
  EXPECT_EQ(wedge_inclusion(w1, w2), Inclusion::equal);
}

TEST(Inclusion, MixedBackendsAreStructural) {
  EXPECT_THROW(wedge_inclusion(Wedge::minkowski_reference(), Wedge::desitter_reference()), StructuralError);
}

TEST(CoherentKey, RotationsShareKey) {
  const auto W0 = Wedge::minkowski_reference();
  for (const Eigen::Vector3d e : {Eigen::Vector3d(0, 0, 1.1), Eigen::Vector3d(0.4, -0.3, 0.2)})
    EXPECT_TRUE(coherent_family_key(W0) == coherent_family_key(Wedge::minkowski(rotation(e), Vector4::Zero())));
}

TEST(CoherentKey, BoostChangesKeyTranslationDoesNot) {
  const auto W0 = Wedge::minkowski_reference();
  const auto k0 = coherent_family_key(W0);
  const auto boosted = Wedge::minkowski(rotation({0, 0, M_PI / 2}) * boost_x1(1.0) * rotation({0, 0, -M_PI / 2}),
                                        Vector4::Zero());
  EXPECT_FALSE(k0 == coherent_family_key(boosted));
  EXPECT_TRUE(k0 == coherent_family_key(translated_w0({0.3, 1, 2, 3})));
}

TEST(CoherentKey, DesitterUnsupported) {
  EXPECT_THROW(coherent_family_key(Wedge::desitter_reference()), UnsupportedError);
}

TEST(BoostFlow, ReferenceWedgeMatrix) {
  const auto W0 = Wedge::minkowski_reference();
  const auto id = boost_flow(W0, 0.0);
  EXPECT_LT((id.L - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
  const double t = 0.3;
  const auto iso = boost_flow(W0, t);
  EXPECT_NEAR(iso.L(0, 0), std::cosh(2 * M_PI * t), 1e-12);
  EXPECT_NEAR(iso.L(1, 1), std::cosh(2 * M_PI * t), 1e-12);
  EXPECT_NEAR(iso.L(0, 1), std::sinh(2 * M_PI * t), 1e-12);
  EXPECT_NEAR(iso.L(1, 0), std::sinh(2 * M_PI * t), 1e-12);
  EXPECT_NEAR(iso.L(2, 2), 1.0, 1e-15);
  EXPECT_NEAR(iso.L(3, 3), 1.0, 1e-15);
}

TEST(BoostFlow, ReflectionReversesParameter) {
  const auto W0 = Wedge::minkowski_reference();
  Eigen::Matrix4d j = Eigen::Matrix4d::Identity();
  j(1, 1) = j(2, 2) = -1;
  const Eigen::MatrixXd lhs = j * boost_flow(W0, 0.2).L * j;
  EXPECT_LT((lhs - boost_flow(W0, -0.2).L).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BoostFlow, PreservesWedge) {
  const auto W = Wedge::minkowski(rotation({0.1, 0.5, -0.4}) * boost_x1(0.3), {0.2, -0.1, 0.5, 0});
  const auto iso = boost_flow(W, 0.17);
  const auto e = edge_of(W);
  const Eigen::VectorXd moved = iso.L * e.base + iso.shift;
  EXPECT_LT((moved - e.base).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Frw, RadiationToyConformalTime) {
  const auto chart = FRWChart::power(1.0, 1.0);
  EXPECT_EQ(chart->tau(1.0), 0.0);
  EXPECT_NEAR(chart->tau(std::exp(1.0)), 1.0, 1e-12);
  EXPECT_THROW(chart->tau(-1.0), RangeError);
  EXPECT_NEAR(chart->t_of_tau(1.0), std::exp(1.0), 1e-12);
}

TEST(Frw, ExactAndQuadratureConformalTimeAgree) {
  const auto exact = FRWChart::power(2.0, 0.5);
  const FRWChart quad([](double t) { return 2.0 * std::sqrt(t); }, 0.0, std::numeric_limits<double>::infinity(), 1.0);
  for (double t : {0.01, 0.5, 3.0, 40.0}) EXPECT_NEAR(exact->tau(t), quad.tau(t), 1e-12);
  EXPECT_NEAR(exact->tau_lower(), -1.0, 1e-15);
  EXPECT_NEAR(quad.tau_lower(), -1.0, 1e-9);
  EXPECT_TRUE(std::isinf(quad.tau_upper()));
}

TEST(Frw, EdgeImageIsConstantTauPlane) {
  const auto chart = FRWChart::power(1.0, 1.0);
  const Edge E{Backend::frw, {2.0, 0, 0, 0}, KillingPair{Backend::frw, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  const auto img = frw_edge_image(E, *chart);
  EXPECT_NEAR(img.tau, std::log(2.0), 1e-14);
  EXPECT_LT(img.base.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(std::abs(img.dir1.cross(img.dir2).normalized()[0]), 1.0, 1e-14);
}

TEST(Frw, TranslatedEdgesGiveParallelPlanes) {
  const auto chart = FRWChart::power(1.0, 0.5);
  const KillingPair xi{Backend::frw, {0, 0.3, 1, 0}, {0, 0, 0.2, 1}};
  const auto a = frw_edge_image(Edge{Backend::frw, {1.5, 0, 0, 0}, xi}, *chart);
  const auto b = frw_edge_image(Edge{Backend::frw, {1.5, 1, -2, 0.5}, xi}, *chart);
  EXPECT_LT(a.dir1.cross(a.dir2).normalized().cross(b.dir1.cross(b.dir2).normalized()).norm(), 1e-14);
}

TEST(Frw, WholeLineChartRejected) {
  const auto chart = FRWChart::exponential(1.0);
  const Edge E{Backend::frw, {0.0, 0, 0, 0}, KillingPair{Backend::frw, {0, 0, 1, 0}, {0, 0, 0, 1}}};
  EXPECT_THROW(frw_edge_image(E, *chart), PreconditionError);
}

TEST(Json, WedgeRoundTrip) {
  const auto W = Wedge::minkowski(rotation({0.2, 0.1, -0.7}) * boost_x1(0.4), {1, 2, 3, 4});
  const auto back = wedge_from_json(to_json(W));
  EXPECT_LT(back.canonical().distance(W.canonical()), 1e-12);
  EXPECT_THROW(wedge_from_json({{"lorentz", 1}}), StructuralError);
}
