#include <doctest.h>

#include <cmath>

#include "afdsim/catalog.hpp"
#include "afdsim/moeplan.hpp"

using namespace afd;

namespace {

AcceleratorSpec synthetic(double f8, double bw, double net = 4e11) {
  AcceleratorSpec a;
  a.name = "synthetic";
  a.price_usd_per_hour = 1.0;
  a.flops_16bit = f8 / 2.0;
  a.flops_8bit = f8;
  a.mem_bw = bw;
  a.net_bw_per_server = net;
  a.gpus_per_server = 8;
  return a;
}

}  // namespace

TEST_CASE("b_dense from the roofline") {
  const Catalog cat = builtin_catalog();
  CHECK(b_dense(cat.accelerator("H800"), ComputeKind::eight_bit) == 296);
  CHECK(b_dense(cat.accelerator("H20"), ComputeKind::eight_bit) == 37);
  CHECK(b_dense(cat.accelerator("A800"), ComputeKind::sixteen_bit) == 78);
  CHECK(b_dense(cat.accelerator("910B"), ComputeKind::sixteen_bit) == 88);
  CHECK(b_dense(synthetic(2e12, 1e12), ComputeKind::eight_bit) == 1);
}

TEST_CASE("b_moe scales the dense batch by 1/S") {
  const Catalog cat = builtin_catalog();
  const auto& h800 = cat.accelerator("H800");

  ModelSpec m = cat.model("dsv3");
  CHECK(b_moe(h800, m) == 8453);  // ceil(296 * 257 / 9)

  m.moe_sparsity = 0.08;
  CHECK(b_moe(h800, m) == 3700);

  m.moe_sparsity = 1.0;
  CHECK(b_moe(h800, m) == b_dense(h800, ComputeKind::eight_bit));

  SUBCASE("b_moe * S equals b_dense before rounding") {
    for (double s : {0.013, 0.0625, 0.08, 0.35, 1.0}) {
      const double dense = static_cast<double>(b_dense(h800, ComputeKind::eight_bit));
      CHECK(dense / s * s == doctest::Approx(dense).epsilon(1e-12));
    }
  }
}

TEST_CASE("ffn net bytes") {
  const Catalog cat = builtin_catalog();
  const auto& s3 = cat.model("step3");
  CHECK(ffn_net_bytes(s3, 1) == doctest::Approx(3.0 * 7168));
  CHECK(ffn_net_bytes(s3, 3072) == doctest::Approx(66060288.0));
  CHECK(ffn_net_bytes(s3, 0) == 0.0);
}

TEST_CASE("minimum sparsity per accelerator") {
  const Catalog cat = builtin_catalog();
  const auto& s3 = cat.model("step3");
  const Workload w;

  struct Row { const char* accel; double want; };
  for (const Row& r : {Row{"H800", 0.058}, Row{"H20", 0.007}, Row{"A800", 0.031},
                       Row{"910B", 0.034}}) {
    CAPTURE(r.accel);
    const SparsityReport rep = min_sparsity(cat.accelerator(r.accel), s3, w);
    CHECK(std::fabs(rep.s_min - r.want) <= 0.002);
    CHECK(rep.feasible);
    CHECK(rep.net_bytes_per_layer ==
          doctest::Approx(3.0 * 7168 * static_cast<double>(rep.b_moe)));
  }

  SUBCASE("degraded network raises the floor") {
    AcceleratorSpec h800 = cat.accelerator("H800");
    h800.net_efficiency = 0.8;
    const SparsityReport rep = min_sparsity(h800, s3, w);
    CHECK(std::fabs(rep.s_min - 0.073) <= 0.002);
  }

  SUBCASE("derivation applies to 3-stage pipelines only") {
    Workload w4;
    w4.pipeline_stages = 4;
    CHECK_THROWS_WITH_AS(min_sparsity(cat.accelerator("H800"), s3, w4),
                         doctest::Contains("3-stage"), Error);
  }
}

TEST_CASE("over-sparse models fail on high-roofline hardware") {
  const Catalog cat = builtin_catalog();
  const Workload w;
  const auto& dsv3 = cat.model("dsv3");
  CHECK(!min_sparsity(cat.accelerator("H800"), dsv3, w).feasible);
  CHECK(min_sparsity(cat.accelerator("H20"), dsv3, w).feasible);
  for (const char* a : {"H800", "H20", "A800", "910B"})
    CHECK(min_sparsity(cat.accelerator(a), cat.model("step3"), w).feasible);
}

TEST_CASE("s_min responds to each input in the right direction") {
  const Catalog cat = builtin_catalog();
  const Workload w;
  ModelSpec m = cat.model("step3");
  AcceleratorSpec base = cat.accelerator("H800");
  const double s0 = min_sparsity(base, m, w).s_min;

  AcceleratorSpec faster = base;
  faster.flops_8bit = *base.flops_8bit * 1.1;
  CHECK(min_sparsity(faster, m, w).s_min > s0);

  ModelSpec wider = m;
  wider.hidden_dim = static_cast<int>(m.hidden_dim * 1.1);
  CHECK(min_sparsity(base, wider, w).s_min > s0);

  ModelSpec deeper = m;
  deeper.n_layers = static_cast<int>(m.n_layers * 1.1);
  CHECK(min_sparsity(base, deeper, w).s_min > s0);

  AcceleratorSpec more_net = base;
  more_net.net_bw_per_server = base.net_bw_per_server * 1.1;
  CHECK(min_sparsity(more_net, m, w).s_min < s0);

  AcceleratorSpec more_bw = base;
  more_bw.mem_bw = base.mem_bw * 1.1;
  CHECK(min_sparsity(more_bw, m, w).s_min < s0);
}
