#include <catch_amalgamated.hpp>

#include "ctan/num/tape.hpp"
#include "ctan/rng.hpp"
#include "support/oracles.hpp"

using namespace ctan::num;
using ctan::Rng;

namespace {
Tensor random_tensor(std::vector<std::int64_t> shape, Rng& rng, double lo = -1,
                     double hi = 1) {
  Tensor t(std::move(shape));
  for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}
}  // namespace

TEST_CASE("matmul identity and zeros", "[numkernel]") {
  Tape tape;
  Rng rng(7);
  Tensor a = random_tensor({3, 3}, rng);
  Value va = tape.constant(a);
  Value vi = tape.constant(Tensor::identity(3));
  Value prod = matmul(vi, va);
  for (std::int64_t i = 0; i < 9; ++i) CHECK(tape.value(prod)[i] == a[i]);

  Value z = tape.constant(Tensor::zeros({2, 3}));
  Value b = tape.constant(random_tensor({3, 2}, rng));
  Value zb = matmul(z, b);
  REQUIRE(tape.value(zb).shape() == std::vector<std::int64_t>{2, 2});
  for (std::int64_t i = 0; i < 4; ++i) CHECK(tape.value(zb)[i] == 0.0);
}

TEST_CASE("matmul matches triple-loop oracle exactly", "[numkernel]") {
  Rng rng(11);
  Tape tape;
  Tensor a = random_tensor({2, 2}, rng);
  Tensor b = random_tensor({2, 2}, rng);
  Value p = matmul(tape.constant(a), tape.constant(b));
  auto ref = oracle::matmul_ref(a.vec(), b.vec(), 2, 2, 2);
  for (std::int64_t i = 0; i < 4; ++i) CHECK(tape.value(p)[i] == ref[i]);
}

TEST_CASE("matmul shape errors", "[numkernel]") {
  Tape tape;
  Value a = tape.constant(Tensor::zeros({2, 3}));
  Value b = tape.constant(Tensor::zeros({2, 2}));
  CHECK_THROWS_AS(matmul(a, b), ctan::DimensionError);
}

TEST_CASE("matmul vector promotions", "[numkernel]") {
  Tape tape;
  Tensor m({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor x({3}, {1, 1, 1});
  Value mv = matmul(tape.constant(m), tape.constant(x));
  REQUIRE(tape.value(mv).shape() == std::vector<std::int64_t>{2});
  CHECK(tape.value(mv)[0] == 6.0);
  CHECK(tape.value(mv)[1] == 15.0);

  // dot product via two rank-1 operands
  Value d = matmul(tape.constant(x), tape.constant(x));
  CHECK(tape.value(d).is_scalar());
  CHECK(tape.value(d).value() == 3.0);
}

TEST_CASE("elementwise trivial identities", "[numkernel]") {
  Tape tape;
  Value zero = tape.constant(Tensor::zeros({4}));
  Value t = tanh(zero);
  for (std::int64_t i = 0; i < 4; ++i) CHECK(tape.value(t)[i] == 0.0);

  Rng rng(3);
  Value x = tape.constant(random_tensor({5}, rng));
  Value s = add(x, negate(x));
  for (std::int64_t i = 0; i < 5; ++i) CHECK(tape.value(s)[i] == 0.0);

  Value bad = tape.constant(Tensor::zeros({3}));
  CHECK_THROWS_AS(add(zero, bad), ctan::DimensionError);
}

TEST_CASE("tanh matches library-free series oracle", "[numkernel]") {
  Tape tape;
  Value x = tape.constant(Tensor::scalar(0.5));
  Value t = tanh(x);
  CHECK(std::abs(tape.value(t).value() - oracle::tanh_series(0.5)) < 1e-15);
}

TEST_CASE("tanh output strictly inside (-1, 1)", "[numkernel]") {
  Tape tape;
  for (double x : {0.3, 5.0, 19.5, 40.0, 1e6, -27.0, -1e12}) {
    Value t = tanh(tape.constant(Tensor::scalar(x)));
    CHECK(std::abs(tape.value(t).value()) < 1.0);
  }
}

TEST_CASE("backward of sum is ones", "[numkernel]") {
  Tape tape;
  Rng rng(5);
  Value x = tape.leaf(random_tensor({3, 2}, rng));
  Value loss = sum(x);
  tape.backward(loss);
  Tensor g = tape.grad(x);
  for (std::int64_t i = 0; i < 6; ++i) CHECK(g[i] == 1.0);
}

TEST_CASE("gradient of unused leaf is zero", "[numkernel]") {
  Tape tape;
  Rng rng(6);
  Value theta = tape.leaf(random_tensor({4}, rng));
  Value x = tape.leaf(random_tensor({4}, rng));
  Value loss = sum(mul(x, x));
  tape.backward(loss);
  Tensor g = tape.grad(theta);
  for (std::int64_t i = 0; i < 4; ++i) CHECK(g[i] == 0.0);
}

TEST_CASE("backward rejects non-scalar loss", "[numkernel]") {
  Tape tape;
  Value x = tape.leaf(Tensor({2}, {1.0, 2.0}));
  Value y = add(x, x);
  CHECK_THROWS_AS(tape.backward(y), ctan::ContractError);
}

TEST_CASE("composite expression gradients match central differences",
          "[numkernel]") {
  // f(theta) = sum(softmax(W x) * tanh(W x)) + log(sigmoid(dot(x, W x)))
  Rng rng(17);
  Tensor w0 = random_tensor({3, 3}, rng);
  Tensor x0 = random_tensor({3}, rng);

  auto run = [&](Tape& tape, const std::vector<double>& flat) {
    Tensor w({3, 3}, std::vector<double>(flat.begin(), flat.begin() + 9));
    Tensor x({3}, std::vector<double>(flat.begin() + 9, flat.end()));
    Value vw = tape.leaf(w);
    Value vx = tape.leaf(x);
    Value wx = matmul(vw, vx);
    Value f = add(sum(mul(softmax_set(wx), tanh(wx))),
                  log_sigmoid(dot(vx, wx)));
    return std::tuple{vw, vx, f};
  };

  std::vector<double> flat(w0.vec());
  flat.insert(flat.end(), x0.vec().begin(), x0.vec().end());

  Tape tape;
  auto [vw, vx, f] = run(tape, flat);
  tape.backward(f);
  Tensor gw = tape.grad(vw);
  Tensor gx = tape.grad(vx);

  auto eval = [&](const std::vector<double>& th) {
    Tape t2;
    auto [w2, x2, f2] = run(t2, th);
    return t2.value(f2).value();
  };
  std::vector<double> fd = oracle::central_diff(eval, flat);
  for (int i = 0; i < 9; ++i) CHECK(oracle::rel_err(gw[i], fd[i]) < 1e-4);
  for (int i = 0; i < 3; ++i) CHECK(oracle::rel_err(gx[i], fd[9 + i]) < 1e-4);
}

TEST_CASE("backward is linear in the loss", "[numkernel]") {
  Rng rng(23);
  Tensor x0 = random_tensor({4}, rng);
  const double a = 1.7, b = -0.6;

  auto grads = [&](double ca, double cb) {
    Tape tape;
    Value x = tape.leaf(x0);
    Value f = sum(tanh(x));           // f
    Value g = dot(x, x);              // g
    Value loss = add(scale(f, ca), scale(g, cb));
    tape.backward(loss);
    return tape.grad(x);
  };

  Tensor ga = grads(a, 0.0);
  Tensor gb = grads(0.0, b);
  Tensor gab = grads(a, b);
  for (std::int64_t i = 0; i < 4; ++i)
    CHECK(std::abs(gab[i] - (ga[i] + gb[i])) < 1e-14);
}

TEST_CASE("tanh backward derivative identity", "[numkernel]") {
  Rng rng(29);
  Tensor x0 = random_tensor({6}, rng, -2, 2);
  Tape tape;
  Value x = tape.leaf(x0);
  Value loss = sum(tanh(x));
  tape.backward(loss);
  Tensor g = tape.grad(x);
  for (std::int64_t i = 0; i < 6; ++i) {
    const double t = std::tanh(x0[i]);
    CHECK(std::abs(g[i] - (1.0 - t * t)) < 1e-15);
  }
}

TEST_CASE("replay reproduces recorded values bitwise", "[numkernel]") {
  Rng rng(31);
  Tape tape;
  Value x = tape.leaf(random_tensor({8}, rng));
  Value w = tape.leaf(random_tensor({8, 8}, rng));
  Value y = sum(mul(softmax_set(matmul(w, x)), tanh(matmul(w, x))));
  std::vector<double> before;
  for (std::size_t i = 0; i < tape.size(); ++i)
    for (double v :
         tape.value(Value{&tape, static_cast<std::int32_t>(i)}).vec())
      before.push_back(v);
  tape.replay();
  std::vector<double> after;
  for (std::size_t i = 0; i < tape.size(); ++i)
    for (double v :
         tape.value(Value{&tape, static_cast<std::int32_t>(i)}).vec())
      after.push_back(v);
  REQUIRE(before.size() == after.size());
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);
  (void)y;
}

TEST_CASE("determinism: same seed, same graph, same gradients", "[numkernel]") {
  auto build = [] {
    Rng rng(41);
    Tape tape;
    Value x = tape.leaf(Tensor({3}, {rng.uniform(-1, 1), rng.uniform(-1, 1),
                                     rng.uniform(-1, 1)}));
    Value w = tape.leaf(Tensor({3, 3}, [&] {
      std::vector<double> v(9);
      for (auto& e : v) e = rng.uniform(-1, 1);
      return v;
    }()));
    Value loss = log_sigmoid(dot(x, matmul(w, x)));
    tape.backward(loss);
    return std::pair{tape.value(loss).value(), tape.grad(w).vec()};
  };
  auto [l1, g1] = build();
  auto [l2, g2] = build();
  CHECK(l1 == l2);
  REQUIRE(g1.size() == g2.size());
  for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g2[i]);
}

TEST_CASE("concat and slice round trip gradients", "[numkernel]") {
  Tape tape;
  Value a = tape.leaf(Tensor({2}, {1.0, 2.0}));
  Value b = tape.leaf(Tensor({3}, {3.0, 4.0, 5.0}));
  Value c = concat({a, b});
  REQUIRE(tape.value(c).numel() == 5);
  Value s = slice(c, 1, 3);
  CHECK(tape.value(s)[0] == 2.0);
  CHECK(tape.value(s)[2] == 4.0);
  Value loss = sum(mul(s, s));
  tape.backward(loss);
  Tensor ga = tape.grad(a);
  Tensor gb = tape.grad(b);
  CHECK(ga[0] == 0.0);
  CHECK(ga[1] == 2.0 * 2.0);
  CHECK(gb[0] == 2.0 * 3.0);
  CHECK(gb[1] == 2.0 * 4.0);
  CHECK(gb[2] == 0.0);
}

TEST_CASE("softmax_set normalizes and handles spread inputs", "[numkernel]") {
  Tape tape;
  Value s = softmax_set(tape.constant(Tensor({4}, {1000.0, 999.0, -2.0, 0.0})));
  const Tensor& p = tape.value(s);
  double total = 0.0;
  for (std::int64_t i = 0; i < 4; ++i) {
    CHECK(p[i] >= 0.0);
    total += p[i];
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("log refuses non-positive input", "[numkernel]") {
  Tape tape;
  CHECK_THROWS_AS(log(tape.constant(Tensor::scalar(0.0))), ctan::NumericError);
  CHECK_THROWS_AS(log(tape.constant(Tensor::scalar(-1.0))), ctan::NumericError);
}

TEST_CASE("bce_with_logit is stable at extreme logits", "[numkernel]") {
  Tape tape;
  for (double logit : {-300.0, -40.0, 0.0, 40.0, 300.0}) {
    Value l = tape.leaf(Tensor::scalar(logit));
    Value loss = bce_with_logit(l, 1.0);
    CHECK(std::isfinite(tape.value(loss).value()));
    tape.backward(loss);
    CHECK(std::isfinite(tape.grad(l).value()));
  }
  // exact center: p = 0.5, loss = ln 2
  Value l0 = tape.constant(Tensor::scalar(0.0));
  CHECK(std::abs(tape.value(bce_with_logit(l0, 1.0)).value() - std::log(2.0)) <
        1e-15);
}
