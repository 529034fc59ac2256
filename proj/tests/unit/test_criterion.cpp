#include "epsconvex/criterion.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace epsconvex;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

double coth(double x) { return 1.0 / std::tanh(x); }

struct Plane {
  HyperbolicSpace sp;
  Point o;
  TangentVector e1, e2;
  explicit Plane(double a = 1.0) : sp(2, a), o(sp.origin()) {
    const auto f = sp.tangent_frame(o);
    e1 = f[0];
    e2 = f[1];
  }
};

Point on_boundary(const ConvexBody& body, double angle) {
  const auto& sp = body.space();
  const Point anchor = interior_point(body);
  const auto f = sp.tangent_frame(anchor);
  TangentVector u{anchor, std::cos(angle) * f[0].vec + std::sin(angle) * f[1].vec};
  return *ray_exit(body, anchor, sp.unit(u), 20.0);
}

TangentVector boundary_tangent(const ConvexBody& body, const Point& x) {
  return boundary_frame(body, x).front();
}

}  // namespace

TEST(InwardNormal, BallAndHalfSpace) {
  Plane p;
  const auto ball = ConvexBody::ball(p.sp, p.o, 0.9);
  const Point x = on_boundary(ball, 0.7);
  const TangentVector n = inward_normal(ball, x);
  EXPECT_NEAR(p.sp.norm(n), 1.0, 1e-10);
  EXPECT_LE((n.vec - p.sp.unit(p.sp.log_map(x, p.o)).vec).norm(), 1e-10);
  EXPECT_EQ(distance_to_body(ball, p.sp.exp_map(x, p.sp.scaled(n, 1e-4))), 0.0);

  const auto hs = ConvexBody::half_space(p.sp, p.e2);
  const Point y = p.sp.exp_map(p.o, p.sp.scaled(p.e1, 0.4));
  EXPECT_LE((inward_normal(hs, y).vec - p.sp.parallel_transport(p.o, y, p.e2).vec).norm(), 1e-12);
  EXPECT_THROW(inward_normal(ball, p.o), Error);
}

TEST(SecondFundamentalForm, SpheresOnGrid) {
  for (double a : {0.5, 1.0, 2.0}) {
    Plane p(a);
    for (double r : {0.3, 1.0, 2.5}) {
      const auto ball = ConvexBody::ball(p.sp, p.sp.point_from_spatial(v2(0.2, -0.1)), r);
      for (double ang : {0.0, 1.1, 4.0}) {
        const Point x = on_boundary(ball, ang);
        EXPECT_NEAR(second_fundamental_form(ball, x, boundary_tangent(ball, x)), a * coth(a * r),
                    1e-5)
            << "a=" << a << " r=" << r;
      }
    }
  }
}

TEST(SecondFundamentalForm, TubesHorospheresHyperplanes) {
  Plane p;
  for (double eps : {0.2, 1.0, 1.7}) {
    const auto tube = ConvexBody::geodesic_tube(p.sp, p.e1, eps);
    const Point x = on_boundary(tube, 1.3);
    EXPECT_NEAR(second_fundamental_form(tube, x, boundary_tangent(tube, x)), std::tanh(eps), 1e-5);
  }
  const auto horo = ConvexBody::horoball(p.sp, v2(0.3, 1.0), 0.5);
  const Point h = on_boundary(horo, 2.0);
  EXPECT_NEAR(second_fundamental_form(horo, h, boundary_tangent(horo, h)), 1.0, 1e-5);
  const auto hs = ConvexBody::half_space(p.sp, p.e2);
  const Point y = on_boundary(hs, -1.2);
  EXPECT_NEAR(second_fundamental_form(hs, y, boundary_tangent(hs, y)), 0.0, 1e-6);
}

TEST(SecondFundamentalForm, RejectsNonTangent) {
  Plane p;
  const auto ball = ConvexBody::ball(p.sp, p.o, 1.0);
  const Point x = on_boundary(ball, 0.0);
  EXPECT_THROW(second_fundamental_form(ball, x, inward_normal(ball, x)), Error);
}

TEST(ShapeOperator, ClosedFormMatchesNumericInThreeSpace) {
  HyperbolicSpace sp(3, 1.3);
  const Point o = sp.origin();
  const auto f = sp.tangent_frame(o);
  const auto tube = ConvexBody::geodesic_tube(sp, f[2], 0.6);
  const auto pts = boundary_sample_directions(tube, {Vec::Unit(3, 0), (Vec::Unit(3, 0) + Vec::Unit(3, 1)).normalized()});
  for (const auto& x : pts.points) {
    const auto frame = boundary_frame(tube, x);
    const auto num = shape_operator(tube, x, frame);
    const auto exact = closed_form_shape_operator(tube, x, frame);
    ASSERT_TRUE(exact);
    EXPECT_LE((num.matrix() - exact->matrix()).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(IIBounds, ClosedFormsAndCorners) {
  Plane p;
  const auto b = ii_bounds(ConvexBody::ball(p.sp, p.o, 1.0));
  EXPECT_TRUE(b.closed_form);
  EXPECT_DOUBLE_EQ(b.lower, coth(1.0));
  const auto h = ii_bounds(ConvexBody::horoball(p.sp, v2(1, 0), 1.0));
  EXPECT_EQ(h.lower, 1.0);

  const Point l = p.sp.exp_map(p.o, p.sp.scaled(p.e1, -0.5));
  const auto wedge = ConvexBody::intersection(
      {ConvexBody::half_space(p.sp, p.sp.parallel_transport(p.o, l, p.e1)),
       ConvexBody::half_space(p.sp, p.sp.unit(p.sp.tangent(p.o, p.e1.vec + p.e2.vec)))});
  const auto w = ii_bounds(wedge, 256);
  EXPECT_FALSE(w.closed_form);
  EXPECT_GT(w.corners, 0);
  EXPECT_NEAR(w.lower, 0.0, 1e-6);
  EXPECT_NEAR(w.upper, 0.0, 1e-6);
}

TEST(IIBounds, SampledLens) {
  Plane p;
  const double r = 1.0;
  const auto lens = ConvexBody::intersection(
      {ConvexBody::ball(p.sp, p.sp.point_from_spatial(v2(-0.3, 0)), r),
       ConvexBody::ball(p.sp, p.sp.point_from_spatial(v2(0.3, 0)), r)});
  const auto w = ii_bounds(lens, 128);
  EXPECT_NEAR(w.lower, coth(r), 1e-5);
  EXPECT_NEAR(w.upper, coth(r), 1e-5);
}

TEST(Verdicts, Examples) {
  Plane p;
  const auto pb = PinchBounds::make(1.0, 1.0);
  const auto hs = ConvexBody::half_space(p.sp, p.e1);
  for (double eps : {0.1, 1.0}) {
    const auto v = check_necessary(hs, eps, pb);
    EXPECT_FALSE(v.passed);
    EXPECT_FALSE(v.strictly_convex);
    EXPECT_FALSE(check_iff_constant_curvature(hs, eps, 1.0).passed);
  }
  const auto ball = ConvexBody::ball(p.sp, p.o, 1.2);
  EXPECT_TRUE(check_necessary(ball, 0.8, pb).passed);
  EXPECT_TRUE(check_sufficient(ball, 0.8, pb).passed);
  EXPECT_FALSE(check_sufficient(ball, 1.5, pb).passed);
  const auto horo = ConvexBody::horoball(p.sp, v2(0, 1), 1.0);
  for (double eps : {0.1, 1.0, 10.0}) EXPECT_TRUE(check_necessary(horo, eps, pb).passed);

  const auto tube = ConvexBody::hyperplane_tube(p.sp, p.e2, 0.7);
  const auto edge = check_sufficient(tube, 0.7, pb);
  EXPECT_TRUE(edge.passed);
  EXPECT_TRUE(edge.inconclusive);
  EXPECT_TRUE(check_iff_constant_curvature(ConvexBody::geodesic_tube(p.sp, p.e1, 0.5), 0.5, 1.0).passed);
  EXPECT_THROW(check_iff_constant_curvature(ball, 0.5, 2.0), Error);
}

TEST(Verdicts, SufficientImpliesNecessary) {
  Plane p;
  const PinchBounds pb = PinchBounds::make(0.8, 1.3);
  HyperbolicSpace sp(2, 0.8);
  const auto o = sp.origin();
  std::vector<ConvexBody> bodies{ConvexBody::ball(sp, o, 0.5), ConvexBody::ball(sp, o, 2.0),
                                 ConvexBody::horoball(sp, v2(1, 0), 1.0),
                                 ConvexBody::geodesic_tube(sp, sp.tangent_frame(o)[0], 1.0)};
  for (const auto& b : bodies)
    for (double eps = 0.1; eps < 3.0; eps += 0.2)
      if (check_sufficient(b, eps, pb).passed) EXPECT_TRUE(check_necessary(b, eps, pb).passed);
}

TEST(NormalFlow, Basics) {
  Plane p;
  const auto ball = ConvexBody::ball(p.sp, p.o, 0.9);
  const Point x = on_boundary(ball, 2.2);
  EXPECT_LE((normal_flow(ball, x, 0.0).coords - x.coords).norm(), 1e-15);
  EXPECT_NEAR(p.sp.distance(normal_flow(ball, x, 0.9), p.o), 0.0, 1e-9);
  EXPECT_NEAR(p.sp.distance(x, normal_flow(ball, x, -0.4)), 0.4, 1e-12);
}

TEST(Profile, ClosedFormBarriers) {
  Plane p;
  const double eps = 1.0;
  const auto ball = ConvexBody::ball(p.sp, p.o, eps);
  const auto prof = flow_curvature_profile(ball, on_boundary(ball, 0.3), eps, 64);
  ASSERT_EQ(prof.times.size(), 64u);
  for (std::size_t k = 0; k < prof.times.size(); ++k)
    EXPECT_NEAR(prof.lambda_plus[k] / coth(eps - prof.times[k]), 1.0, 1e-6);
  EXPECT_TRUE(prof.blow_up);
  EXPECT_NEAR(*prof.focal_time, eps, 1e-5);

  const auto horo = ConvexBody::horoball(p.sp, v2(1, 1), 2.0);
  const auto hp = flow_curvature_profile(horo, on_boundary(horo, 1.0), 2.0, 16);
  for (double l : hp.lambda_minus) EXPECT_NEAR(l, 1.0, 1e-6);
  EXPECT_FALSE(hp.blow_up);

  const auto slab = ConvexBody::hyperplane_tube(p.sp, p.e1, 0.8);
  const auto sp = flow_curvature_profile(slab, on_boundary(slab, 0.2), 0.8, 16);
  for (std::size_t k = 0; k < sp.times.size(); ++k)
    EXPECT_NEAR(sp.lambda_minus[k], std::tanh(0.8 - sp.times[k]), 1e-6);
}

TEST(FocalTime, Examples) {
  for (double a : {0.7, 1.0, 1.6}) {
    Plane p(a);
    for (double r : {0.5, 1.5}) {
      const auto ball = ConvexBody::ball(p.sp, p.o, r);
      const auto f = focal_time(ball, on_boundary(ball, 1.0), 2.0 * r, 200);
      ASSERT_TRUE(f);
      EXPECT_NEAR(*f, r, 1e-4);
    }
  }
  Plane p;
  const auto slab = ConvexBody::hyperplane_tube(p.sp, p.e1, 0.8);
  EXPECT_FALSE(focal_time(slab, on_boundary(slab, 0.4), 1.8, 100));
  const auto horo = ConvexBody::horoball(p.sp, v2(1, 0), 1.0);
  EXPECT_FALSE(focal_time(horo, on_boundary(horo, 0.4), 20.0, 100));
}

TEST(FlowedII, MatchesRiccati) {
  Plane p;
  const auto ball = ConvexBody::ball(p.sp, p.o, 1.0);
  const Point x = on_boundary(ball, 0.5);
  for (double t : {0.0, 0.3, 0.6}) {
    EXPECT_NEAR(flowed_second_fundamental_form(ball, x, boundary_tangent(ball, x), t),
                coth(1.0 - t), 1e-5);
  }
}

TEST(RoundTrip, Bodies) {
  Plane p;
  const auto ball = ConvexBody::ball(p.sp, p.o, 1.0);
  const auto rb = erode_dilate_check(ball, 0.5, 128);
  EXPECT_TRUE(rb.passed);
  EXPECT_LE(rb.defect, 1e-9);
  EXPECT_TRUE(rb.iff.passed);

  const auto tube = ConvexBody::geodesic_tube(p.sp, p.e1, 0.6);
  EXPECT_TRUE(erode_dilate_check(tube, 0.6, 64).passed);

  const auto hs = ConvexBody::half_space(p.sp, p.e1);
  const auto rh = erode_dilate_check(hs, 0.5, 64);
  EXPECT_TRUE(rh.set_equal);
  EXPECT_FALSE(rh.core_convex);
  EXPECT_FALSE(rh.iff.passed);
  EXPECT_FALSE(rh.passed);
  EXPECT_THROW(erode_dilate_check(ball, 1.5, 64), Error);
}
