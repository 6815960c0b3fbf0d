#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "potfuse/error.hpp"
#include "potfuse/io_data.hpp"
#include "potfuse/toy.hpp"

using namespace potfuse;

TEST_CASE("toy figures on banana data") {
  const ToyFigures toy = build_toy(make_banana(200, 0.15, 0), 40);
  CHECK(trapezoid(toy.w_pos) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(trapezoid(toy.w_neg) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(trapezoid(toy.projected) == doctest::Approx(1.0).epsilon(1e-2));
  for (const Heatmap* h : {&toy.ka_map, &toy.kb_map, &toy.kc_map}) {
    CHECK(h->values.rows() == 40);
    CHECK(h->values.cols() == 40);
    CHECK(h->values.maxCoeff() <= 0.5);
    CHECK(h->values.minCoeff() >= -0.5);
  }
  CHECK(toy.projections.size() == 400);
}

TEST_CASE("toy writes six deterministic svg files") {
  const auto dir = std::filesystem::temp_directory_path() / "potfuse_toy_test";
  std::filesystem::remove_all(dir);
  const Dataset data = make_banana(60, 0.15, 2);
  const auto first = write_toy_svgs(build_toy(data, 20), dir / "a");
  const auto second = write_toy_svgs(build_toy(data, 20), dir / "b");
  REQUIRE(first.size() == 6);
  for (std::size_t i = 0; i < first.size(); ++i) {
    std::ifstream fa(first[i]), fb(second[i]);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str().find("<svg") != std::string::npos);
    CHECK(sa.str().find("</svg>") != std::string::npos);
    CHECK(sa.str() == sb.str());
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("toy rejects non 2-D data") {
  Dataset d = make_blobs(10, 4, 1, 0);
  d.features.conservativeResize(Eigen::NoChange, 3);
  d.features.col(2).setZero();
  d.feature_names.push_back("z");
  CHECK_THROWS_AS(build_toy(d), InputError);
}
