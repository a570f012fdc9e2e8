#include <catch_amalgamated.hpp>

#include "ctan/num/adam.hpp"

using namespace ctan::num;

TEST_CASE("adam: zero gradient and zero decay leaves params unchanged",
          "[numkernel]") {
  Tensor p({3}, {0.5, -0.25, 1.0});
  Adam opt({.lr = 1e-3}, {&p});
  opt.step({&p}, {Tensor::zeros({3})});
  CHECK(p[0] == 0.5);
  CHECK(p[1] == -0.25);
  CHECK(p[2] == 1.0);
  CHECK(opt.step_count() == 1);
}

TEST_CASE("adam: single step matches the hand-computed formula", "[numkernel]") {
  // one scalar parameter, g = 1, lr = 1e-3, defaults beta1/beta2/eps
  Tensor p = Tensor::scalar(0.0);
  Adam opt({.lr = 1e-3}, {&p});
  opt.step({&p}, {Tensor::scalar(1.0)});

  const double m = (1.0 - 0.9) * 1.0;
  const double v = (1.0 - 0.999) * 1.0 * 1.0;
  const double mhat = m / (1.0 - 0.9);    // == 1 after bias correction
  const double vhat = v / (1.0 - 0.999);  // == 1 after bias correction
  const double expected = 0.0 - 1e-3 * mhat / (std::sqrt(vhat) + 1e-8);
  CHECK(p.value() == expected);
}

TEST_CASE("adam: refuses NaN gradients with diagnostic", "[numkernel]") {
  Tensor p = Tensor::scalar(1.0);
  Adam opt({.lr = 1e-3}, {&p});
  Tensor bad = Tensor::scalar(std::nan(""));
  CHECK_THROWS_AS(opt.step({&p}, {bad}), ctan::NumericError);
  CHECK(p.value() == 1.0);          // untouched
  CHECK(opt.step_count() == 0);     // step not consumed
}

TEST_CASE("adam: decoupled weight decay shrinks weights", "[numkernel]") {
  Tensor p = Tensor::scalar(1.0);
  Adam opt({.lr = 0.1, .weight_decay = 0.5}, {&p});
  opt.step({&p}, {Tensor::scalar(0.0)});
  // zero gradient: only the decay term acts, p <- p - lr*wd*p
  CHECK(std::abs(p.value() - (1.0 - 0.1 * 0.5)) < 1e-15);
}

TEST_CASE("adam: step count increases by one per update", "[numkernel]") {
  Tensor p = Tensor::scalar(0.0);
  Adam opt({.lr = 1e-3}, {&p});
  for (int i = 1; i <= 5; ++i) {
    opt.step({&p}, {Tensor::scalar(0.5)});
    CHECK(opt.step_count() == i);
  }
}
