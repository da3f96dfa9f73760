// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gossip_loc/error.hpp"

namespace gossip_loc {

namespace {

using nlohmann::json;

template <typename Enum>
struct Names {
  Enum value;
  const char* name;
};

constexpr Names<GraphSource> kGraphNames[] = {{GraphSource::Complete, "complete"},
                                              {GraphSource::Ring, "ring"},
                                              {GraphSource::RandomGnp, "random_gnp"},
                                              {GraphSource::File, "file"}};
constexpr Names<TruthKind> kTruthNames[] = {{TruthKind::Ramp, "ramp"},
                                            {TruthKind::ZeroMeanGaussian, "zero_mean_gaussian"},
                                            {TruthKind::Explicit, "explicit"}};
constexpr Names<NoiseKind> kNoiseNames[] = {{NoiseKind::Gaussian, "gaussian"},
                                            {NoiseKind::Uniform, "uniform"},
                                            {NoiseKind::None, "none"}};

template <typename Enum, std::size_t N>
const char* name_of(const Names<Enum> (&table)[N], Enum value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
Enum parse_enum(const Names<Enum> (&table)[N], const json& j, const char* field) {
  if (!j.is_string()) throw Error(Errc::ValidationError, "expected a string", field);
  const auto s = j.get<std::string>();
  for (const auto& entry : table) {
    if (s == entry.name) return entry.value;
  }
  throw Error(Errc::ValidationError, "unknown value '" + s + "'", field);
}

double get_double(const json& j, const char* field) {
  if (!j.is_number()) throw Error(Errc::ValidationError, "expected a number", field);
  return j.get<double>();
}

std::int64_t get_int(const json& j, const char* field) {
  if (!j.is_number_integer()) throw Error(Errc::ValidationError, "expected an integer", field);
  return j.get<std::int64_t>();
}

std::uint64_t get_uint(const json& j, const char* field) {
  if (!j.is_number_unsigned()) {
    throw Error(Errc::ValidationError, "expected a non-negative integer", field);
  }
  return j.get<std::uint64_t>();
}

std::vector<double> get_doubles(const json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::ValidationError, "expected an array of numbers", field);
  std::vector<double> out;
  for (const auto& item : j) out.push_back(get_double(item, field));
  return out;
}

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::string default_output_dir() {
  if (const char* env = std::getenv("GOSSIP_LOC_OUT"); env && *env) return env;
  return "gossip_out";
}

void validate_config(const ExperimentConfig& c) {
  if (c.graph != GraphSource::File && c.n < 2) {
    throw Error(Errc::ValidationError, "need at least 2 nodes", "n");
  }
  if (!(c.p >= 0.0 && c.p <= 1.0)) {
    throw Error(Errc::ValidationError, "edge probability must lie in [0,1]", "p");
  }
  if (c.graph == GraphSource::File && c.graph_file.empty()) {
    throw Error(Errc::ValidationError, "graph 'file' requires graph_file", "graph_file");
  }
  if (!(c.truth_sigma >= 0.0) || !std::isfinite(c.truth_sigma)) {
    throw Error(Errc::ValidationError, "must be finite and >= 0", "truth_sigma");
  }
  if (c.truth == TruthKind::Explicit) {
    if (!finite_all(c.truth_values)) {
      throw Error(Errc::ValidationError, "entries must be finite", "truth_values");
    }
    if (c.graph != GraphSource::File &&
        static_cast<std::int64_t>(c.truth_values.size()) != c.n) {
      throw Error(Errc::ValidationError, "length must equal n", "truth_values");
    }
  }
  if (!(c.noise.sigma >= 0.0) || !std::isfinite(c.noise.sigma)) {
    throw Error(Errc::ValidationError, "must be finite and >= 0", "sigma");
  }
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) {
    throw Error(Errc::ValidationError, "gamma must lie in (0,1)", "gamma");
  }
  if (c.x0) {
    if (!finite_all(*c.x0)) throw Error(Errc::ValidationError, "entries must be finite", "x0");
    if (c.graph != GraphSource::File && static_cast<std::int64_t>(c.x0->size()) != c.n) {
      throw Error(Errc::ValidationError, "length must equal n", "x0");
    }
  }
  if (c.trials < 1) throw Error(Errc::ValidationError, "need at least 1 trial", "trials");
  if (c.output_dir.empty()) {
    throw Error(Errc::ValidationError, "must not be empty", "output_dir");
  }
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError,
                "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::ParseError, "line 1: top level must be an object");

  ExperimentConfig c;
  c.output_dir = default_output_dir();
  for (const auto& [key, value] : doc.items()) {
    const char* k = key.c_str();
    if (key == "graph") {
      c.graph = parse_enum(kGraphNames, value, k);
    } else if (key == "n") {
      c.n = get_int(value, k);
    } else if (key == "p") {
      c.p = get_double(value, k);
    } else if (key == "graph_file") {
      if (!value.is_string()) throw Error(Errc::ValidationError, "expected a string", k);
      c.graph_file = value.get<std::string>();
    } else if (key == "truth") {
      c.truth = parse_enum(kTruthNames, value, k);
    } else if (key == "truth_sigma") {
      c.truth_sigma = get_double(value, k);
    } else if (key == "truth_values") {
      c.truth_values = get_doubles(value, k);
    } else if (key == "noise") {
      c.noise.kind = parse_enum(kNoiseNames, value, k);
    } else if (key == "sigma") {
      c.noise.sigma = get_double(value, k);
    } else if (key == "gamma") {
      c.gamma = get_double(value, k);
    } else if (key == "x0") {
      if (value.is_string() && value.get<std::string>() == "zero") {
        c.x0.reset();
      } else {
        c.x0 = get_doubles(value, k);
      }
    } else if (key == "horizon") {
      c.horizon = get_uint(value, k);
    } else if (key == "trials") {
      c.trials = get_uint(value, k);
    } else if (key == "stride") {
      c.stride = get_uint(value, k);
    } else if (key == "subsequence") {
      if (value.is_string()) {
        const auto s = value.get<std::string>();
        if (s == "all") {
          c.subsequence = Subsequence::all();
        } else if (s == "even") {
          c.subsequence = Subsequence::even();
        } else {
          throw Error(Errc::ValidationError, "expected 'all', 'even' or an index array", k);
        }
      } else if (value.is_array()) {
        std::vector<std::uint64_t> idx;
        for (const auto& item : value) idx.push_back(get_uint(item, k));
        c.subsequence = Subsequence::indices(std::move(idx));
      } else {
        throw Error(Errc::ValidationError, "expected 'all', 'even' or an index array", k);
      }
    } else if (key == "seed") {
      c.seed = get_uint(value, k);
    } else if (key == "output_dir") {
      if (!value.is_string()) throw Error(Errc::ValidationError, "expected a string", k);
      c.output_dir = value.get<std::string>();
    } else if (key == "threads") {
      c.threads = static_cast<unsigned>(get_uint(value, k));
    } else {
      throw Error(Errc::ValidationError, "unknown key", k);
    }
  }
  validate_config(c);
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  json j = json::object();
  j["graph"] = name_of(kGraphNames, c.graph);
  j["n"] = c.n;
  j["p"] = c.p;
  if (!c.graph_file.empty()) j["graph_file"] = c.graph_file;
  j["truth"] = name_of(kTruthNames, c.truth);
  j["truth_sigma"] = c.truth_sigma;
  if (!c.truth_values.empty()) j["truth_values"] = c.truth_values;
  j["noise"] = name_of(kNoiseNames, c.noise.kind);
  j["sigma"] = c.noise.sigma;
  j["gamma"] = c.gamma;
  if (c.x0) {
    j["x0"] = *c.x0;
  } else {
    j["x0"] = "zero";
  }
  j["horizon"] = c.horizon;
  j["trials"] = c.trials;
  j["stride"] = c.stride;
  switch (c.subsequence.kind()) {
    case Subsequence::Kind::All: j["subsequence"] = "all"; break;
    case Subsequence::Kind::Even: j["subsequence"] = "even"; break;
    case Subsequence::Kind::Indices: j["subsequence"] = c.subsequence.index_list(); break;
  }
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  return j.dump(2);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::IoError, "cannot read config " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gossip_loc
