#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "specgap/bands.hpp"
#include "specgap/profile.hpp"
#include "specgap/truncation.hpp"

using namespace specgap;
namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("mode cutoff") {
  Profile p = assemble_chain({1, 0.2, 0.02, true, 0});  // max f = 1
  CHECK(mode_cutoff(p, 13.0) == 4);
  CHECK(mode_cutoff(p, 0.5) == 1);
  CHECK(mode_cutoff(p, 16.0) == 5);  // strict inequality at the boundary

  // the first dominated mode has no spectrum below lambda_max
  TridiagOp op = sl_discretize(p, mode_cutoff(p, 13.0) + 1, Bc::periodic);
  CHECK(sturm_count(op, 13.0) == 0);
  // and already m_max itself is dominated (m_max^2 > lambda_max)
  TridiagOp opm = sl_discretize(p, mode_cutoff(p, 13.0), Bc::periodic);
  CHECK(sturm_count(opm, 13.0) == 0);
}

TEST_CASE("flat cylinder has no gaps") {
  Profile p = cylinder_profile(1.0, kPi, 5e-3, true);
  GapReport rep = band_structure(p, 10.0, 0.05, 1e-6, 1e-3);
  CHECK(rep.gaps.empty());
  REQUIRE(rep.bands.size() == 1);
  CHECK(rep.bands[0].first == 0.0);
  CHECK(rep.bands[0].second == 10.0);
}

TEST_CASE("bands and gaps partition the window") {
  Profile p = assemble_chain({1, 0.2, 0.02, true, 0});
  GapReport rep = band_structure(p, 13.0, 0.05, 1e-6, 1e-3);
  REQUIRE(!rep.bands.empty());
  double cursor = 0.0;
  std::size_t bi = 0, gi = 0;
  while (bi < rep.bands.size() || gi < rep.gaps.size()) {
    if (bi < rep.bands.size() && std::abs(rep.bands[bi].first - cursor) < 1e-6) {
      cursor = rep.bands[bi++].second;
    } else {
      REQUIRE(gi < rep.gaps.size());
      CHECK(std::abs(rep.gaps[gi].first - cursor) < 1e-6);
      cursor = rep.gaps[gi++].second;
    }
  }
  CHECK(cursor == Catch::Approx(13.0).margin(1e-9));

  // gaps sorted and disjoint
  for (std::size_t i = 0; i + 1 < rep.gaps.size(); ++i)
    CHECK(rep.gaps[i].second < rep.gaps[i + 1].first);
}

TEST_CASE("compare_to_model verdict mechanics") {
  Profile p = assemble_chain({1, 0.2, 0.02, true, 0});
  GapReport rep = band_structure(p, 13.0, 0.05, 1e-6, 1e-3);

  SECTION("empty model spectrum gives the single trivial interval verdict") {
    compare_to_model(rep, {}, 0.3);
    REQUIRE(rep.verdicts.size() == 1);
  }
  SECTION("model spectrum verdicts populate both families") {
    compare_to_model(rep, rep.model_spectrum, 0.3);
    // 3 interior complement intervals + 4 model points
    REQUIRE(rep.verdicts.size() == 7);
  }
}

TEST_CASE("truncation scan classifications") {
  ChainConfig base{1, 0.2, 0.02, false, 0};
  // interval far above every mode's window counts zero states: slope 0, gap
  TruncationResult res = truncation_scan(base, {2, 3, 4}, {{100.0, 101.0}, {1.8, 2.3}});
  CHECK(res.classification[0] == "gap");
  for (std::size_t li = 0; li < res.lengths.size(); ++li) CHECK(res.counts[li][0] == 0);
  // the k = 1 cluster grows like ~3 states per block at eps = 0.2
  CHECK(res.slopes[1] >= 0.5);

  CHECK_THROWS_AS(truncation_scan(base, {}, {{1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(truncation_scan(base, {2}, {{2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("slope classifier thresholds") {
  CHECK(classify_slope(0.01) == "gap");
  CHECK(classify_slope(-0.02) == "gap");
  CHECK(classify_slope(0.2) == "indeterminate");
  CHECK(classify_slope(0.7) == "band");
}

TEST_CASE("covering gap experiment on the 6-cycle") {
  CoveringGapReport rep = covering_gap_experiment(6, BlockKind::cycle, 0.01, {6, 10, 14});
  // distinct block spectrum {0, 1, 3, 4}
  REQUIRE(rep.block_spectrum.size() == 4);
  CHECK(rep.block_spectrum[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(rep.block_spectrum[1] == Catch::Approx(1.0).margin(1e-12));
  CHECK(rep.block_spectrum[2] == Catch::Approx(3.0).margin(1e-12));
  CHECK(rep.block_spectrum[3] == Catch::Approx(4.0).margin(1e-12));

  CHECK(rep.max_dist_to_block_spectrum <= 0.05);
  for (const auto& cls : rep.classification) CHECK(cls == "gap");
  CHECK(rep.neck_lift_ok);

  // w = 0 covering spectrum is exactly L copies of the block spectrum
  BlockGraphOp cov0 = block_graph_laplacian(6, BlockKind::cycle, 0.0, Covering::line(5));
  auto ev = dense_eigenvalues(cov0);
  BlockGraphOp lone = block_graph_laplacian(6, BlockKind::cycle, 0.0, Covering::base());
  auto block = dense_eigenvalues(lone);
  REQUIRE(ev.size() == 5 * block.size());
  for (std::size_t i = 0; i < ev.size(); ++i)
    CHECK(ev[i] == Catch::Approx(block[i / 5]).margin(1e-9));
}
