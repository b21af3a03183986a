#include <cmath>

#include "doctest.h"
#include "veselova/body.hpp"

using namespace veselova;

namespace {

bool has_plane(const std::vector<PrincipalPlane>& v, int i, int j) {
  for (const auto& p : v)
    if (p.i == i && p.j == j) return true;
  return false;
}

}  // namespace

TEST_CASE("symmetry classes") {
  CHECK(std::holds_alternative<Generic>(classify_symmetry(MassTensor{1, 2, 3})));

  const auto axi = classify_symmetry(MassTensor{1, 2, 2});
  REQUIRE(std::holds_alternative<Axisymmetric>(axi));
  CHECK(std::get<Axisymmetric>(axi).axis == 0);
  CHECK(std::get<Axisymmetric>(axi).j1 == 1.0);
  CHECK(std::get<Axisymmetric>(axi).j2 == 2.0);

  const auto axi2 = classify_symmetry(MassTensor{2, 2, 5, 2});
  REQUIRE(std::holds_alternative<Axisymmetric>(axi2));
  CHECK(std::get<Axisymmetric>(axi2).axis == 2);

  const auto cyl = classify_symmetry(MassTensor{1, 1, 2, 2});
  REQUIRE(std::holds_alternative<Cylindrical>(cyl));
  CHECK(std::get<Cylindrical>(cyl).r() == 2);
  CHECK(std::get<Cylindrical>(cyl).r_prime() == 2);

  const auto cyl2 = classify_symmetry(MassTensor{3, 1, 3, 3, 1});
  REQUIRE(std::holds_alternative<Cylindrical>(cyl2));
  CHECK(std::get<Cylindrical>(cyl2).first == std::vector<int>{1, 4});
  CHECK(std::get<Cylindrical>(cyl2).j1 == 1.0);

  CHECK(std::holds_alternative<OtherMultiplicity>(classify_symmetry(MassTensor{1, 1, 2, 3})));
  CHECK(is_isotropic(MassTensor{2, 2, 2}));
  CHECK(!is_isotropic(MassTensor{2, 2, 2.1}));
}

TEST_CASE("extremal planes") {
  const auto g = extremal_planes(MassTensor{1, 2, 3});
  REQUIRE(g.minimal.size() == 1);
  REQUIRE(g.maximal.size() == 1);
  CHECK(has_plane(g.minimal, 0, 1));
  CHECK(g.minimal[0].moment == 3.0);
  CHECK(has_plane(g.maximal, 1, 2));
  CHECK(g.maximal[0].moment == 5.0);

  const auto iso = extremal_planes(MassTensor{1, 1, 1});
  CHECK(iso.minimal.size() == 3);
  CHECK(iso.maximal.size() == 3);

  const auto axi = extremal_planes(MassTensor{1, 2, 2});
  CHECK(axi.minimal.size() == 2);
  CHECK(has_plane(axi.minimal, 0, 1));
  CHECK(has_plane(axi.minimal, 0, 2));
  REQUIRE(axi.maximal.size() == 1);
  CHECK(has_plane(axi.maximal, 1, 2));
  CHECK(axi.maximal[0].moment == 4.0);
}

TEST_CASE("principal plane from a basis") {
  const MassTensor J{1, 2, 2};
  Vector a = Vector::Unit(3, 0);
  Vector b(3);
  b << 0, std::sqrt(0.5), std::sqrt(0.5);
  const PrincipalPlane p = PrincipalPlane::from_basis(J, a, b);
  CHECK(p.moment == doctest::Approx(3.0));
  Vector bad(3);
  bad << std::sqrt(0.5), std::sqrt(0.5), 0;
  CHECK_THROWS(PrincipalPlane::from_basis(MassTensor{1, 2, 3}, Vector::Unit(3, 2), bad));
}

TEST_CASE("fj matrix") {
  const auto a = fj_matrix(MassTensor{1, 2, 3});
  REQUIRE(a.has_value());
  CHECK((*a)[0] == doctest::Approx(1.549193).epsilon(1e-6));
  CHECK((*a)[1] == doctest::Approx(1.936492).epsilon(1e-6));
  CHECK((*a)[2] == doctest::Approx(2.581989).epsilon(1e-6));
  CHECK((*a)[0] * (*a)[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fj_condition_residual(MassTensor{1, 2, 3}, *a) < 1e-12);

  const auto b = fj_matrix(MassTensor{1, 2, 2, 2});
  REQUIRE(b.has_value());
  CHECK((*b)[0] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK((*b)[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fj_condition_residual(MassTensor{1, 2, 2, 2}, *b) < 1e-12);

  CHECK(!fj_matrix(MassTensor{1, 2, 3, 4}).has_value());
  CHECK(!fj_matrix(MassTensor{1, 1, 2, 2}).has_value());
  const Vector ls = fj_least_squares(MassTensor{1, 2, 3, 4});
  CHECK(fj_condition_residual(MassTensor{1, 2, 3, 4}, ls) > 0.1);
}

TEST_CASE("rank-two witness") {
  CHECK(rank2_preservation_witness(MassTensor{1, 2, 3, 4}) == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(std::abs(rank2_preservation_witness(MassTensor{1, 2, 1, 2})) < 1e-12);
  CHECK(rank2_preservation_witness_max(MassTensor{1, 2, 3, 4}) >= 16.0 - 1e-10);
  CHECK(rank2_preservation_witness_max(MassTensor{1, 1, 2, 2}) > 0.5);
  CHECK(std::abs(rank2_preservation_witness_max(MassTensor{1, 2, 2, 2})) < 1e-12);
}
