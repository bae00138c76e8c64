#include <doctest.h>

#include <json.hpp>
#include <cmath>
#include <sstream>

#include "support.hpp"
#include "wqed/error.hpp"
#include "wqed/io.hpp"
#include "wqed/lattice.hpp"
#include "wqed/pipeline.hpp"
#include "wqed/spectral.hpp"

using namespace wqed;
using nlohmann::json;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(io::read_text(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

RunConfig config_at(const std::filesystem::path& dir, json j) {
  j["out"] = dir.string();
  return config_from_json(j);
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = config_from_json(json{{"atoms", 12}, {"phase", 0.5}, {"strengths", {0, 1.5}}, {"max-dim", 99}});
  CHECK(c.atoms == std::vector<std::size_t>{12});
  CHECK(c.phase == 0.5);
  CHECK(c.strengths == std::vector<double>{0.0, 1.5});
  CHECK(c.max_dim == 99);
  CHECK(c.single_atoms() == 12);
  CHECK_THROWS_AS(config_from_json(json{{"atom", 3}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"atoms", -3}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"atoms", "3"}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"sector", "three"}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"select", "darkest"}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"distribution", "cauchy"}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"fail-threshold", 2}}), Error);
  CHECK_THROWS_AS(config_from_json(json{{"tasks", {"plot"}}}), Error);
  CHECK_THROWS_AS(config_from_json(json::array()), Error);
  CHECK_THROWS_AS(config_from_json(json{{"atoms", {3, 4}}}).single_atoms(), Error);
  CHECK(config_from_json(json{{"tasks", json::array()}}).tasks.empty());

  const auto resolved = config_to_json(c);
  CHECK_FALSE(resolved.contains("out"));
  CHECK(config_from_json(json::parse(resolved.dump())).atoms == c.atoms);
  CHECK_THROWS_AS(parse_command("plot"), Error);
}

TEST_CASE("spectrum of two atoms") {
  const auto dir = testing::scratch_dir("pipe_n2");
  const auto report = run(Command::Spectrum, config_at(dir, {{"atoms", 2}}));
  CHECK(report.exit_code == 0);
  const auto rows = read_csv(dir / "spectrum.csv");
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(std::stod(rows[1][1])) < 1e-12);
  CHECK(std::stod(rows[1][2]) == doctest::Approx(-1.0).epsilon(1e-12));
  for (const char* f : {"config.json", "spectrum.csv", "single.csv", "histogram.csv", "manifest.json"})
    CHECK(std::filesystem::exists(dir / f));
}

TEST_CASE("spectrum of three atoms matches the oracle") {
  const auto dir = testing::scratch_dir("pipe_n3");
  run(Command::Spectrum, config_at(dir, {{"atoms", 3}, {"phase", 1.0}}));
  const auto rows = read_csv(dir / "spectrum.csv");
  REQUIRE(rows.size() == 4);
  const auto oracle = eig_dense(oracle_full_space(ArrayConfig::clean(3, 1.0)));
  for (std::size_t k = 0; k < 3; ++k) {
    const cplx e{std::stod(rows[k + 1][1]), std::stod(rows[k + 1][2])};
    CHECK(std::abs(e - 0.5 * oracle.values[k]) < 1e-10);
  }
  CHECK(read_csv(dir / "single.csv").size() == 4);
}

TEST_CASE("wavefunction by index matches a direct eigensolve") {
  const auto dir = testing::scratch_dir("pipe_wf3");
  run(Command::Wavefunction, config_at(dir, {{"atoms", 3}, {"select", "index"}, {"index", 0}}));
  const auto cfg = ArrayConfig::clean(3, 1.0);
  const PairBasis basis(3);
  const auto eig = eig_dense(build_pair_hamiltonian(cfg, basis));
  const auto v = eig.vectors.column(0);
  const auto rows = read_csv(dir / "psi2.csv");
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const auto [a, b] = basis.pair(i);
    CHECK(std::stod(rows[a - 1][b - 1]) == doctest::Approx(std::norm(v[i]) / 2).epsilon(1e-10));
    CHECK(std::stod(rows[b - 1][a - 1]) == doctest::Approx(std::norm(v[i]) / 2).epsilon(1e-10));
  }
  const auto meta = json::parse(io::read_text(dir / "wavefunction.json"));
  CHECK(meta["index"] == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "svd.json"));
  CHECK_THROWS_AS(run(Command::Wavefunction, config_at(dir, {{"atoms", 3}, {"select", "index"}, {"index", 3}})),
                  Error);
  CHECK_THROWS_AS(run(Command::Wavefunction, config_at(dir, {{"atoms", 3}, {"sector", "one"}})), Error);
}

TEST_CASE("most-distant wavefunction writes the decomposition outputs") {
  const auto dir = testing::scratch_dir("pipe_wf12");
  run(Command::Wavefunction, config_at(dir, {{"atoms", 12}, {"truncate", 3}}));
  for (const char* f : {"psi2.csv", "wavefunction.json", "svd.json", "truncated.csv", "svd_vectors.csv", "fourier.csv"})
    CHECK(std::filesystem::exists(dir / f));
  const auto svd = json::parse(io::read_text(dir / "svd.json"));
  CHECK(svd["truncate"] == 3);
  CHECK(svd["reconstruction_error"].get<double>() < 1e-8);
  CHECK(svd["orthogonality_defect"].get<double>() < 1e-8);
  CHECK(svd["terms"].size() == 12);
  const auto fourier = read_csv(dir / "fourier.csv");
  CHECK(fourier.size() == 13);
  CHECK(fourier[0].size() == 13);
  CHECK(fourier[0][0] == "k");
  CHECK(read_csv(dir / "svd_vectors.csv")[0].size() == 7);
  CHECK_THROWS_AS(run(Command::Wavefunction, config_at(dir, {{"atoms", 12}, {"truncate", 0}})), Error);
}

TEST_CASE("brightest single-particle wavefunction peaks at both edges") {
  const auto dir = testing::scratch_dir("pipe_wf40");
  run(Command::Wavefunction, config_at(dir, {{"atoms", 40}, {"sector", "one"}, {"select", "brightest"}}));
  const auto rows = read_csv(dir / "wavefunction.csv");
  REQUIRE(rows.size() == 41);
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (std::stod(rows[i][3]) > best) {
      best = std::stod(rows[i][3]);
      arg = i;
    }
  CHECK((arg == 1 || arg == 40));
  CHECK(std::stod(rows[1][3]) == doctest::Approx(std::stod(rows[40][3])).epsilon(1e-8));
  CHECK(std::stod(rows[20][3]) < 0.2 * best);
}

TEST_CASE("scaling with no tasks writes the manifest only") {
  const auto dir = testing::scratch_dir("pipe_scaling_empty");
  const auto report = run(Command::Scaling, config_at(dir, {{"atoms", {16, 32}}, {"tasks", json::array()}}));
  CHECK(report.files == std::vector<std::string>{"config.json", "manifest.json"});
}

TEST_CASE("scaling tables") {
  const auto dir = testing::scratch_dir("pipe_scaling");
  run(Command::Scaling, config_at(dir, {{"atoms", {16, 32, 64}}, {"tasks", {"decay", "wavefunctions"}}}));
  const auto rows = read_csv(dir / "scaling.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"N", "minus_im_eps_numeric", "decay_lambert", "decay_asymptotic", "q", "qN"});
  CHECK(std::filesystem::exists(dir / "wavefunction_N64.csv"));
  CHECK(std::filesystem::exists(dir / "edge_check.csv"));
  const auto capped = testing::scratch_dir("pipe_scaling_capped");
  CHECK_THROWS_AS(run(Command::Scaling, config_at(capped, {{"atoms", {16, 32}}, {"tasks", {"pair"}}, {"max-dim", 200}})),
                  Error);
  CHECK_FALSE(std::filesystem::exists(capped / "manifest.json"));
}

TEST_CASE("pair spectra in the scaling sweep") {
  const auto dir = testing::scratch_dir("pipe_scaling_pair");
  run(Command::Scaling, config_at(dir, {{"atoms", {6, 8}}, {"tasks", {"pair"}}}));
  CHECK(read_csv(dir / "pair_spectrum_N8.csv").size() == 29);
  CHECK_FALSE(std::filesystem::exists(dir / "scaling.csv"));
}

TEST_CASE("disorder runs are reproducible from the manifest") {
  const auto a = testing::scratch_dir("pipe_dis_a");
  const auto b = testing::scratch_dir("pipe_dis_b");
  const json params{{"atoms", 10}, {"strengths", {0, 1, 2, 5}}, {"realizations", 3}, {"seed", 77}, {"workers", 2}};
  const auto ra = run(Command::Disorder, config_at(a, params));
  CHECK(ra.exit_code == 0);
  CHECK(ra.attempted == 12);
  CHECK(ra.failed == 0);
  const auto rb = run(Command::Disorder, config_at(b, params));
  for (const auto& f : ra.files) CHECK(io::read_text(a / f) == io::read_text(b / f));

  const auto c = testing::scratch_dir("pipe_dis_c");
  const auto rep = replay(a / "manifest.json", c);
  CHECK(rep.mismatched.empty());
  CHECK(rep.run.exit_code == 0);
  CHECK(io::read_text(a / "manifest.json") == io::read_text(c / "manifest.json"));

  const auto manifest = json::parse(io::read_text(a / "manifest.json"));
  CHECK(manifest["command"] == "disorder");
  CHECK(manifest["ensemble"]["realization_seeds"].size() == 3);
  CHECK(manifest["outputs"].size() == 3);
  const auto map = read_csv(a / "map.csv");
  CHECK(map.size() == 13);
  CHECK(map[0][0] == "strength");
}

TEST_CASE("replay detects tampered outputs") {
  const auto a = testing::scratch_dir("pipe_tamper");
  run(Command::Disorder, config_at(a, {{"atoms", 5}, {"realizations", 2}}));
  auto manifest = json::parse(io::read_text(a / "manifest.json"));
  manifest["outputs"][1]["sha256"] = std::string(64, '0');
  io::write_text(a / "manifest.json", manifest.dump());
  const auto rep = replay(a / "manifest.json", testing::scratch_dir("pipe_tamper_out"));
  CHECK(rep.mismatched.size() == 1);
  CHECK(rep.run.exit_code == 4);
}

TEST_CASE("failed realizations beyond the threshold set a nonzero exit code") {
  const auto dir = testing::scratch_dir("pipe_fail");
  const auto report = run(Command::Disorder, config_at(dir, {{"atoms", 8}, {"realizations", 2}, {"max-dim", 10}}));
  CHECK(report.failed == 2);
  CHECK(report.exit_code == 3);
  CHECK(std::filesystem::exists(dir / "map.csv"));
  const auto ok = run(Command::Disorder,
                      config_at(dir, {{"atoms", 8}, {"realizations", 2}, {"max-dim", 10}, {"fail-threshold", 1.0}}));
  CHECK(ok.exit_code == 0);
}
