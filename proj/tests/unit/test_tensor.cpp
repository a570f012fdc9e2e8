#include <catch_amalgamated.hpp>

#include "ctan/num/tensor.hpp"

using ctan::num::Tensor;

TEST_CASE("tensor shape/data coupling", "[numkernel]") {
  Tensor t({2, 3});
  CHECK(t.numel() == 6);
  CHECK(t.rank() == 2);
  for (std::int64_t i = 0; i < 6; ++i) CHECK(t[i] == 0.0);

  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0}), ctan::DimensionError);
}

TEST_CASE("tensor scalar and identity", "[numkernel]") {
  Tensor s = Tensor::scalar(2.5);
  CHECK(s.is_scalar());
  CHECK(s.value() == 2.5);

  Tensor i3 = Tensor::identity(3);
  CHECK(i3.at(0, 0) == 1.0);
  CHECK(i3.at(0, 1) == 0.0);
  CHECK(i3.at(2, 2) == 1.0);

  Tensor v({4}, {1, 2, 3, 4});
  CHECK_THROWS_AS(v.value(), ctan::ContractError);
}

TEST_CASE("tensor finiteness probe", "[numkernel]") {
  Tensor t({2}, {1.0, 2.0});
  CHECK(t.all_finite());
  t[1] = std::nan("");
  CHECK(!t.all_finite());
}
