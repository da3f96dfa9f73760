// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>

#include "gossip_loc/config.hpp"
#include "gossip_loc/error.hpp"

using namespace gossip_loc;

namespace {

Error error_of(std::string_view text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("no error thrown");
  return Error(Errc::IoError, "unreachable");
}

}  // namespace

TEST_CASE("minimal config takes the reference defaults") {
  const ExperimentConfig c = parse_config(R"({"graph": "complete", "n": 20})");
  CHECK(c.graph == GraphSource::Complete);
  CHECK(c.n == 20);
  CHECK(c.gamma == 0.1);
  CHECK_FALSE(c.x0.has_value());
  CHECK(c.noise.kind == NoiseKind::Gaussian);
  CHECK(c.noise.sigma == 1.0);
  CHECK(c.stride == 0);
  CHECK(c.trials == 1);
  CHECK(c.subsequence == Subsequence::all());
  CHECK(parse_config("{}") == c);
}

TEST_CASE("validation errors name the field") {
  CHECK(error_of(R"({"gamma": 1.5})").field() == "gamma");
  CHECK(error_of(R"({"gamma": 1.5})").code() == Errc::ValidationError);
  CHECK(error_of(R"({"gamma": 0})").field() == "gamma");
  CHECK(error_of(R"({"n": 1})").field() == "n");
  CHECK(error_of(R"({"n": 2.5})").field() == "n");
  CHECK(error_of(R"({"p": 1.2})").field() == "p");
  CHECK(error_of(R"({"sigma": -1})").field() == "sigma");
  CHECK(error_of(R"({"graph": "star"})").field() == "graph");
  CHECK(error_of(R"({"graph": "file"})").field() == "graph_file");
  CHECK(error_of(R"({"truth": "explicit", "n": 3, "truth_values": [1, 2]})").field() ==
        "truth_values");
  CHECK(error_of(R"({"n": 3, "x0": [1, 2]})").field() == "x0");
  CHECK(error_of(R"({"trials": 0})").field() == "trials");
  CHECK(error_of(R"({"horizon": -5})").field() == "horizon");
  CHECK(error_of(R"({"subsequence": "odd"})").field() == "subsequence");
  CHECK(error_of(R"({"gama": 0.2})").field() == "gama");
}

TEST_CASE("parse errors report the line") {
  const Error e = error_of("{\n  \"gamma\": 0.1,\n  \"n\": ,\n}");
  CHECK(e.code() == Errc::ParseError);
  CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  CHECK(error_of("[1, 2]").code() == Errc::ParseError);
}

TEST_CASE("config round-trips through serialization") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    ExperimentConfig c;
    c.output_dir = "out_" + std::to_string(i);
    c.graph = static_cast<GraphSource>(i % 3);
    c.n = 2 + i;
    c.p = unit(rng);
    c.noise.kind = static_cast<NoiseKind>(i % 3);
    c.noise.sigma = 3.0 * unit(rng);
    c.gamma = 0.01 + 0.98 * unit(rng);
    c.truth = i % 2 ? TruthKind::Ramp : TruthKind::Explicit;
    if (c.truth == TruthKind::Explicit) {
      for (int v = 0; v < c.n; ++v) c.truth_values.push_back(unit(rng) - 0.5);
    }
    if (i % 4 == 0) c.x0 = std::vector<double>(static_cast<std::size_t>(c.n), 0.0);
    c.horizon = rng() % 100000;
    c.trials = 1 + rng() % 50;
    c.stride = rng() % 10;
    c.seed = rng();
    c.threads = static_cast<unsigned>(i % 4);
    switch (i % 3) {
      case 0: c.subsequence = Subsequence::all(); break;
      case 1: c.subsequence = Subsequence::even(); break;
      default: c.subsequence = Subsequence::indices({5, 1, 1, 9}); break;
    }
    validate_config(c);
    CHECK(parse_config(serialize_config(c)) == c);
  }
}

TEST_CASE("default output directory follows the environment") {
  ::setenv("GOSSIP_LOC_OUT", "/tmp/gossip_env_out", 1);
  CHECK(parse_config("{}").output_dir == "/tmp/gossip_env_out");
  ::unsetenv("GOSSIP_LOC_OUT");
  CHECK(parse_config("{}").output_dir == "gossip_out");
}
