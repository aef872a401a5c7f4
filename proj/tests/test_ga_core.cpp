#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "galms/mat3.hpp"
#include "galms/multivector.hpp"
#include "galms/random.hpp"
#include "galms/rotor.hpp"
#include "oracles.hpp"

using namespace galms;
using namespace galms::blades;
using doctest::Approx;

namespace {

constexpr double kPi = 3.14159265358979323846;

double rel_diff(const Multivector& a, const Multivector& b) {
  const double scale = std::max({magnitude(a), magnitude(b), 1e-300});
  return magnitude(a - b) / scale;
}

}  // namespace

TEST_CASE("geometric product matches the brute-force blade oracle on all 64 basis pairs") {
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const Multivector got = Multivector::basis(static_cast<std::size_t>(i)) *
                              Multivector::basis(static_cast<std::size_t>(j));
      const auto expect = oracles::blade_product(i, j);
      for (int k = 0; k < 8; ++k) {
        const double want = (k == expect.index) ? static_cast<double>(expect.sign) : 0.0;
        INFO("blade ", i, " * blade ", j, " slot ", k);
        CHECK(got.c[static_cast<std::size_t>(k)] == want);
      }
    }
  }
}

TEST_CASE("geometric product worked example: g1 (2 g1 + 4 g3) = 2 - 4 g31") {
  const Multivector a = g1;
  const Multivector b = 2.0 * g1 + 4.0 * g3;
  const Multivector p = a * b;
  CHECK(p.c[0] == 2.0);
  CHECK(p.c[6] == -4.0);
  for (int k : {1, 2, 3, 4, 5, 7}) CHECK(p.c[static_cast<std::size_t>(k)] == 0.0);
}

TEST_CASE("scalar 1 is the multiplicative identity") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const Multivector a = oracles::random_multivector(rng);
    CHECK((one * a) == a);
    CHECK((a * one) == a);
  }
}

TEST_CASE("bivector squares: g12 g12 = -1") {
  const Multivector p = g12 * g12;
  CHECK(p.c[0] == -1.0);
  CHECK(magnitude(p - Multivector::scalar(-1.0)) == 0.0);
}

TEST_CASE("outer product basics") {
  CHECK((g1 ^ g2) == g12);
  CHECK((g2 ^ g3) == g23);
  CHECK((g3 ^ g1) == g31);

  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Vec3 av = oracles::random_vec(rng);
    const Vec3 bv = oracles::random_vec(rng);
    const Multivector a = to_multivector(av);
    const Multivector b = to_multivector(bv);

    // a ^ a = 0 and antisymmetry
    CHECK(magnitude(a ^ a) == 0.0);
    CHECK(magnitude((a ^ b) + (b ^ a)) == 0.0);

    // vector wedge equals (ab - ba) / 2
    const Multivector viaprod = (a * b - b * a) * 0.5;
    CHECK(rel_diff(a ^ b, viaprod) < 1e-15);
  }
}

TEST_CASE("outer product of (g1 + g2) and (2 g1 + 4 g3) via the product oracle") {
  const Multivector a = g1 + g2;
  const Multivector b = 2.0 * g1 + 4.0 * g3;
  const Multivector expect = (a * b - b * a) * 0.5;  // -2 g12 - 4 g31 + 4 g23... evaluated, not assumed
  CHECK((a ^ b) == expect);
  CHECK((a ^ b).c[0] == 0.0);
}

TEST_CASE("reversion flips grades 2 and 3 only") {
  const Multivector a = Multivector{{1.5, 2.0, -1.0, 0.5, 3.0, -2.5, 0.25, -4.0}};
  const Multivector r = reverse(a);
  CHECK(r.c[0] == a.c[0]);
  CHECK(r.c[1] == a.c[1]);
  CHECK(r.c[2] == a.c[2]);
  CHECK(r.c[3] == a.c[3]);
  CHECK(r.c[4] == -a.c[4]);
  CHECK(r.c[5] == -a.c[5]);
  CHECK(r.c[6] == -a.c[6]);
  CHECK(r.c[7] == -a.c[7]);
  CHECK(reverse(r) == a);       // involution
  CHECK(reverse(I) == -1.0 * I);
}

TEST_CASE("reversion is an anti-automorphism: (AB)~ = B~ A~") {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    const Multivector a = oracles::random_multivector(rng);
    const Multivector b = oracles::random_multivector(rng);
    CHECK(rel_diff(reverse(a * b), reverse(b) * reverse(a)) < 1e-15);
  }
}

TEST_CASE("scalar product") {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const Multivector a = oracles::random_multivector(rng);
    const Multivector b = oracles::random_multivector(rng);

    // <AB> is the grade-0 part of the geometric product
    CHECK(scalar_product(a, b) == (a * b).c[0]);
    // cyclic reordering
    CHECK(scalar_product(a, b) == Approx((b * a).c[0]).epsilon(1e-13));

    // A * A~ recovers the squared coefficient norm
    double sq = 0.0;
    for (double v : a.c) sq += v * v;
    CHECK(scalar_product(a, reverse(a)) == Approx(sq).epsilon(1e-14));
  }
  CHECK(scalar_product(g12, g12) == -1.0);
  const Multivector a = oracles::random_multivector(rng);
  CHECK(scalar_product(one, a) == a.c[0]);
}

TEST_CASE("magnitude") {
  const Multivector r0 = Multivector{{0.5, 0, 0, 0, 0.5, 0.5, 0.5, 0}};
  CHECK(magnitude(r0) == Approx(1.0).epsilon(1e-15));
  CHECK(magnitude(Multivector{}) == 0.0);
  CHECK(magnitude(g1 + g2) == Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("grade projection") {
  const Multivector a = Multivector::scalar(2.0) - 4.0 * g31;
  CHECK(grade(a, 0) == Multivector::scalar(2.0));
  CHECK(grade(a, 2) == -4.0 * g31);

  const Multivector tri = g1 * g2 * g3;
  CHECK(grade(tri, 3) == I);

  Rng rng(19);
  for (int t = 0; t < 50; ++t) {
    const Multivector m = oracles::random_multivector(rng);
    Multivector sum;
    for (int g = 0; g <= 3; ++g) {
      CHECK(grade(grade(m, g), g) == grade(m, g));  // idempotent
      sum += grade(m, g);
    }
    CHECK(sum == m);  // grade completeness, exact
  }
  CHECK_THROWS_AS(grade(a, 4), std::invalid_argument);
  CHECK_THROWS_AS(grade(a, -1), std::invalid_argument);
}

TEST_CASE("vector decomposition: ab = a.b + a^b, exactly") {
  Rng rng(23);
  for (int t = 0; t < 200; ++t) {
    const Vec3 av = oracles::random_vec(rng);
    const Vec3 bv = oracles::random_vec(rng);
    const Multivector a = to_multivector(av);
    const Multivector b = to_multivector(bv);
    const Multivector p = a * b;
    CHECK(p.c[0] == av.dot(bv));
    CHECK(grade(p, 1) == Multivector{});
    CHECK(grade(p, 3) == Multivector{});
    CHECK(grade(p, 2) == (a ^ b));
  }
}

TEST_CASE("associativity over 1000 random triples") {
  Rng rng(29);
  for (int t = 0; t < 1000; ++t) {
    const Multivector a = oracles::random_multivector(rng);
    const Multivector b = oracles::random_multivector(rng);
    const Multivector c = oracles::random_multivector(rng);
    CHECK(rel_diff((a * b) * c, a * (b * c)) < 1e-12);
  }
}

TEST_CASE("cyclic reordering <ABC> = <CAB> over random triples") {
  Rng rng(31);
  for (int t = 0; t < 500; ++t) {
    const Multivector a = oracles::random_multivector(rng);
    const Multivector b = oracles::random_multivector(rng);
    const Multivector c = oracles::random_multivector(rng);
    const double abc = (a * b * c).c[0];
    const double cab = (c * a * b).c[0];
    const double scale = std::max(std::abs(abc), 1.0);
    CHECK(std::abs(abc - cab) / scale < 1e-12);
  }
}

TEST_CASE("rotor_apply: identity rotor") {
  const Vec3 x{0.3, -1.2, 0.7};
  CHECK(rotor_apply(Rotor{}, x) == x);
}

TEST_CASE("rotor_apply: rotation about z by theta maps g1 to cos g1 + sin g2") {
  for (double theta : {0.1, 0.7, 2.0, -1.3}) {
    const Rotor r{std::cos(theta / 2), -std::sin(theta / 2), 0.0, 0.0};  // cos - sin g12
    const Vec3 out = rotor_apply(r, {1, 0, 0});
    CHECK(out.x == Approx(std::cos(theta)).epsilon(1e-14));
    CHECK(out.y == Approx(std::sin(theta)).epsilon(1e-14));
    CHECK(out.z == Approx(0.0).scale(1.0));
  }
}

TEST_CASE("non-unit rotor scales the sandwich by lambda^2") {
  Rng rng(37);
  for (int t = 0; t < 50; ++t) {
    const Rotor q = oracles::random_unit_rotor(rng);
    const double lambda = rng.uniform(0.2, 3.0);
    const Multivector lam_q = q.as_multivector() * lambda;
    const Vec3 xv = oracles::random_vec(rng);
    const Multivector sand = lam_q * to_multivector(xv) * reverse(lam_q);
    CHECK(magnitude(sand) == Approx(lambda * lambda * xv.norm()).epsilon(1e-12));
  }
  // and rotor_apply refuses the non-unit rotor outright
  CHECK_THROWS_AS(rotor_apply(Rotor{2, 0, 0, 0}, Vec3{1, 0, 0}), std::invalid_argument);
}

TEST_CASE("rotor_apply preserves norms (1000 random cases)") {
  Rng rng(41);
  for (int t = 0; t < 1000; ++t) {
    const Rotor r = oracles::random_unit_rotor(rng);
    const Vec3 x = oracles::random_vec(rng, 2.0);
    const Vec3 y = rotor_apply(r, x);
    CHECK(std::abs(y.norm() - x.norm()) <= 1e-12 * std::max(x.norm(), 1e-300));
  }
}

TEST_CASE("rotor_normalize") {
  const Rotor r0{0.5, 0.5, 0.5, 0.5};
  CHECK(rotor_normalize(r0) == r0);  // |r0| is exactly 1

  Rng rng(43);
  const Rotor q = oracles::random_unit_rotor(rng);
  const Rotor two_q = q * 2.0;
  const Rotor back = rotor_normalize(two_q);
  CHECK(rotor_distance(back, q) < 1e-15);

  const Rotor odd{1.0, -0.1, 0.0, 0.0};
  const Rotor n = rotor_normalize(odd);
  const double scale = std::sqrt(1.01);
  CHECK(n.s == Approx(1.0 / scale).epsilon(1e-15));
  CHECK(n.b12 == Approx(-0.1 / scale).epsilon(1e-15));
  CHECK(std::abs(n.norm() - 1.0) < 1e-15);

  CHECK_THROWS_AS(rotor_normalize(Rotor{0, 0, 0, 0}), std::domain_error);
  CHECK_THROWS_AS(rotor_normalize(Rotor{1e-13, 0, 0, 0}), std::domain_error);
}

TEST_CASE("rotor_from_axis_angle") {
  CHECK(rotor_from_axis_angle({0, 0, 1}, 0.0) == Rotor{});

  // 90 degrees about z: g1 -> g2
  const Rotor rz = rotor_from_axis_angle({0, 0, 1}, kPi / 2);
  const Vec3 out = rotor_apply(rz, {1, 0, 0});
  CHECK(out.x == Approx(0.0).scale(1.0));
  CHECK(out.y == Approx(1.0).epsilon(1e-15));

  // full turn: r = -1, action is the identity (double cover)
  const Rotor full = rotor_from_axis_angle({0, 0, 1}, 2 * kPi);
  CHECK(full.s == Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(full.b12) < 1e-15);
  const Vec3 x{0.4, -0.2, 0.9};
  const Vec3 same = rotor_apply(full, x);
  CHECK((same - x).norm() < 1e-15);

  CHECK_THROWS_AS(rotor_from_axis_angle({0, 0, 0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rotor_from_axis_angle({0.5, 0, 0}, 1.0), std::invalid_argument);
}

TEST_CASE("rotor_from_axis_angle agrees with the Rodrigues oracle") {
  Rng rng(47);
  for (int t = 0; t < 300; ++t) {
    const Vec3 axis = oracles::random_unit_vec(rng);
    const double angle = rng.uniform(-2 * kPi, 2 * kPi);
    const Rotor r = rotor_from_axis_angle(axis, angle);
    const Mat3 expect = oracles::axis_angle_matrix(axis, angle);
    const Vec3 x = oracles::random_vec(rng);
    const Vec3 via_rotor = rotor_apply(r, x);
    const Vec3 via_matrix = expect * x;
    CHECK((via_rotor - via_matrix).norm() < 1e-13 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("exp_bivector") {
  CHECK(exp_bivector(Multivector{}) == Rotor{});

  // exp(-(pi/4) g12) rotates g1 to g2
  const Rotor r = exp_bivector(Multivector::bivector(-kPi / 4, 0, 0));
  const Vec3 out = rotor_apply(r, {1, 0, 0});
  CHECK(out.x == Approx(0.0).scale(1.0));
  CHECK(out.y == Approx(1.0).epsilon(1e-15));

  Rng rng(53);
  for (int t = 0; t < 200; ++t) {
    const Multivector b = Multivector::bivector(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    CHECK(std::abs(exp_bivector(b).norm() - 1.0) < 1e-15);
  }

  CHECK_THROWS_AS(exp_bivector(g1), std::invalid_argument);
  CHECK_THROWS_AS(exp_bivector(Multivector::scalar(1.0) + g12), std::invalid_argument);
}

TEST_CASE("rotor_to_matrix") {
  CHECK(rotor_to_matrix(Rotor{}) == Mat3::identity());

  const Rotor rz = rotor_from_axis_angle({0, 0, 1}, kPi / 2);
  const Mat3 m = rotor_to_matrix(rz);
  // columns (0,1,0), (-1,0,0), (0,0,1)
  CHECK(m(0, 0) == Approx(0.0).scale(1.0));
  CHECK(m(1, 0) == Approx(1.0).epsilon(1e-15));
  CHECK(m(0, 1) == Approx(-1.0).epsilon(1e-15));
  CHECK(m(1, 1) == Approx(0.0).scale(1.0));
  CHECK(m(2, 2) == Approx(1.0).epsilon(1e-15));

  Rng rng(59);
  for (int t = 0; t < 200; ++t) {
    const Rotor r = oracles::random_unit_rotor(rng);
    const Mat3 a = rotor_to_matrix(r);
    CHECK(is_rotation(a));
    CHECK(rotor_to_matrix(-r) == a);  // double cover
  }
  CHECK_THROWS_AS(rotor_to_matrix(Rotor{2, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("rotor_apply agrees with the matrix route (1000 random cases)") {
  Rng rng(61);
  for (int t = 0; t < 1000; ++t) {
    const Rotor r = oracles::random_unit_rotor(rng);
    const Mat3 m = rotor_to_matrix(r);
    const Vec3 x = oracles::random_vec(rng, 2.0);
    const Vec3 via_rotor = rotor_apply(r, x);
    const Vec3 via_matrix = m * x;
    CHECK((via_rotor - via_matrix).norm() <= 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("matrix_to_rotor") {
  CHECK(matrix_to_rotor(Mat3::identity()) == Rotor{});

  const Rotor rz = rotor_from_axis_angle({0, 0, 1}, kPi / 2);
  const Rotor got = matrix_to_rotor(rotor_to_matrix(rz));
  CHECK(rotor_distance(got, rz) < 1e-14);

  // 180 degrees about x: trace = -1, w = 0 branch; must come back as a pure
  // bivector rotor whose action reproduces the matrix.
  Mat3 rx180;
  rx180(0, 0) = 1.0;
  rx180(1, 1) = -1.0;
  rx180(2, 2) = -1.0;
  const Rotor flip = matrix_to_rotor(rx180);
  CHECK(flip.s == 0.0);
  CHECK((rotor_to_matrix(flip) - rx180).max_abs() < 1e-15);
}

TEST_CASE("matrix_to_rotor sign convention: scalar >= 0, first bivector positive on ties") {
  // Exact 180-degree rotations have s == 0; the returned representative must
  // have its first nonzero bivector coefficient positive.
  Mat3 rx180, ry180, rz180;
  rx180(0, 0) = 1.0;
  rx180(1, 1) = -1.0;
  rx180(2, 2) = -1.0;
  ry180(0, 0) = -1.0;
  ry180(1, 1) = 1.0;
  ry180(2, 2) = -1.0;
  rz180(0, 0) = -1.0;
  rz180(1, 1) = -1.0;
  rz180(2, 2) = 1.0;
  for (const Mat3& m : {rx180, ry180, rz180}) {
    const Rotor r = matrix_to_rotor(m);
    CHECK(r.s == 0.0);
    const double lead = r.b12 != 0.0 ? r.b12 : (r.b23 != 0.0 ? r.b23 : r.b31);
    CHECK(lead > 0.0);
  }

  Rng rng(67);
  for (int t = 0; t < 200; ++t) {
    const Rotor r = matrix_to_rotor(rotor_to_matrix(oracles::random_unit_rotor(rng)));
    CHECK(r.s >= 0.0);
  }
}

TEST_CASE("matrix_to_rotor round-trips random rotations within 1e-9") {
  Rng rng(71);
  for (int t = 0; t < 500; ++t) {
    const Vec3 axis = oracles::random_unit_vec(rng);
    const double angle = rng.uniform(0.0, 2 * kPi);
    const Mat3 m = oracles::axis_angle_matrix(axis, angle);
    const Mat3 back = rotor_to_matrix(matrix_to_rotor(m));
    CHECK((back - m).max_abs() < 1e-9);
  }
}

TEST_CASE("matrix_to_rotor rejects invalid input") {
  Mat3 skew = Mat3::identity();
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(matrix_to_rotor(skew), std::invalid_argument);

  Mat3 reflection = Mat3::identity();
  reflection(2, 2) = -1.0;  // orthogonal but det = -1
  CHECK_THROWS_AS(matrix_to_rotor(reflection), std::invalid_argument);
}

TEST_CASE("Euler composition matches Rx Ry Rz") {
  Rng rng(73);
  for (int t = 0; t < 200; ++t) {
    const double ax = rng.uniform(-kPi, kPi);
    const double ay = rng.uniform(-kPi, kPi);
    const double az = rng.uniform(-kPi, kPi);
    const Mat3 expect = oracles::axis_angle_matrix({1, 0, 0}, ax) *
                        (oracles::axis_angle_matrix({0, 1, 0}, ay) * oracles::axis_angle_matrix({0, 0, 1}, az));
    const Mat3 got = rotor_to_matrix(rotor_from_euler_xyz(ax, ay, az));
    CHECK((got - expect).max_abs() < 1e-13);
  }
}

TEST_CASE("rotor products stay finite on finite inputs") {
  Rng rng(79);
  for (int t = 0; t < 200; ++t) {
    const Multivector a = oracles::random_multivector(rng, 1e6);
    const Multivector b = oracles::random_multivector(rng, 1e6);
    CHECK(is_finite(a * b));
    CHECK(is_finite(a ^ b));
  }
}
