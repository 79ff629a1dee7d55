//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "gmc/config.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;

namespace {

std::string gmc_bin() {
  const char* bin = std::getenv("GMC_BIN");
  REQUIRE(bin != nullptr);
  return bin;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = gmc_bin() + " " + args + " 2>&1";
  std::array<char, 512> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe) != nullptr) output += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

// desk-scale corpus + config on disk
struct CliFixture {
  fs::path dir;
  fs::path config;

  CliFixture() {
    dir = fs::temp_directory_path() / "gmc_cli_fixture";
    fs::remove_all(dir);
    const auto records = gmc::test::synthetic_corpus({80, 3, false});
    const std::string manifest = gmc::test::write_corpus(records, dir.string());

    config = dir / "desk.cfg";
    std::ofstream os(config);
    os << "[dataset]\n"
       << "manifest = " << manifest << "\n"
       << "mol2_dir = " << (dir / "mol2").string() << "\n"
       << "task = classification\n\n"
       << "[wcs]\nkernel = Exponential\ntau = 1.0\nkappa = 2\n\n"
       << "[model]\ndepth = 2\nmessage_hidden_dim = 16\nffn_hidden_dim = 12\n"
       << "ffn_num_layers = 2\nactivation = relu\naggregation = mean\n\n"
       << "[train]\nbatch_size = 16\nepochs = 5\nmax_lr = 0.005\n\n"
       << "[study]\nseeds = 0..1\nout = " << (dir / "runs").string() << "\n";
  }
};

}  // namespace

TEST_CASE("unknown flags exit 1 with usage") {
  const RunResult res = run("train --no-such-flag");
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("Usage") != std::string::npos);
}

TEST_CASE("missing subcommand exits 1") {
  CHECK(run("").exit_code == 1);
}

TEST_CASE("help exits 0") {
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("bad config path is a data error (exit 2)") {
  const RunResult res = run("split --config /nonexistent.cfg");
  CHECK(res.exit_code == 2);
}

TEST_CASE("full desk-scale pipeline through the binary") {
  const CliFixture fixture;

  // featurize
  RunResult res = run("featurize --config " + fixture.config.string() +
                      " --out " + (fixture.dir / "cache").string());
  CHECK(res.exit_code == 0);
  CHECK(fs::is_regular_file(fixture.dir / "cache" / "features.gmcf"));

  // split
  res = run("split --config " + fixture.config.string() + " --seeds 0..2");
  CHECK(res.exit_code == 0);
  CHECK(fs::is_regular_file(fixture.dir / "runs" / "splits" / "seed_2.csv"));

  // train a single seed
  res = run("train --config " + fixture.config.string() + " --seed 0");
  CHECK(res.exit_code == 0);
  const fs::path ckpt = fixture.dir / "runs" / "checkpoints" / "seed_0.ckpt";
  CHECK(fs::is_regular_file(ckpt));
  CHECK(fs::is_regular_file(fixture.dir / "runs" / "metrics.csv"));
  CHECK(fs::is_regular_file(fixture.dir / "runs" / "run_manifest.csv"));

  // the resolved config is echoed back and re-parses
  const fs::path echoed = fixture.dir / "runs" / "config_used.cfg";
  CHECK(fs::is_regular_file(echoed));
  const gmc::FullConfig normalized = gmc::load_config_file(echoed.string());
  CHECK(normalized.experiment.seeds == std::vector<std::uint64_t>{0});
  CHECK(normalized.experiment.train.epochs == 5);

  // predict with the checkpoint
  res = run("predict --config " + fixture.config.string() + " --model " +
            ckpt.string());
  CHECK(res.exit_code == 0);
  CHECK(fs::is_regular_file(fixture.dir / "runs" / "predictions.csv"));

  // evaluate on the test partition
  res = run("evaluate --config " + fixture.config.string() + " --model " +
            ckpt.string() + " --seed 0");
  CHECK(res.exit_code == 0);
  CHECK(res.output.find("auc,") != std::string::npos);

  // desk-scale sweep needs grids
  res = run("sweep --config " + fixture.config.string());
  CHECK(res.exit_code == 2);  // no grids configured -> data error
}

TEST_CASE("a failed study exits 3") {
  const CliFixture fixture;
  // a manifest whose molecules all share one scaffold leaves val/test empty,
  // so every seed fails
  const fs::path mono_dir = fixture.dir / "mono";
  std::vector<gmc::DatasetRecord> records;
  for (int i = 0; i < 8; ++i) {
    gmc::DatasetRecord rec;
    rec.id = "b" + std::to_string(i);
    rec.molecule = gmc::test::benzene();
    rec.molecule.id = rec.id;
    rec.label = i % 2;
    records.push_back(rec);
  }
  const std::string manifest = gmc::test::write_corpus(records, mono_dir.string());
  const fs::path mono_cfg = fixture.dir / "mono.cfg";
  {
    std::ofstream os(mono_cfg);
    os << "[dataset]\nmanifest = " << manifest << "\nmol2_dir = "
       << (mono_dir / "mol2").string() << "\ntask = classification\n"
       << "[model]\ndepth = 2\nmessage_hidden_dim = 8\nffn_hidden_dim = 8\n"
       << "[train]\nbatch_size = 16\nepochs = 2\n"
       << "[study]\nseeds = 0\nout = " << (mono_dir / "runs").string() << "\n";
  }
  const RunResult res = run("train --config " + mono_cfg.string());
  CHECK(res.exit_code == 3);
}
