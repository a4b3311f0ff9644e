#include "eegtl/dataset_io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eegtl/errors.hpp"
#include "json.hpp"

namespace eegtl {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void put_f32le(std::string& out, float v) {
  std::uint32_t bits = std::bit_cast<std::uint32_t>(v);
  out.push_back(static_cast<char>(bits & 0xff));
  out.push_back(static_cast<char>((bits >> 8) & 0xff));
  out.push_back(static_cast<char>((bits >> 16) & 0xff));
  out.push_back(static_cast<char>((bits >> 24) & 0xff));
}

float get_f32le(const char* p) {
  std::uint32_t bits = static_cast<std::uint8_t>(p[0]) |
                       (static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[1])) << 8) |
                       (static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[2])) << 16) |
                       (static_cast<std::uint32_t>(static_cast<std::uint8_t>(p[3])) << 24);
  return std::bit_cast<float>(bits);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open " + path.string() + " for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw FormatError("write failed for " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Strict integer parse for label-file fields; rejects trailing junk.
long parse_long(const std::string& s, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw FormatError(std::string("labels.csv: bad ") + what + " '" + s + "'");
  }
  // Allow trailing \r from CRLF files, nothing else.
  while (pos < s.size() && (s[pos] == '\r' || s[pos] == ' ')) ++pos;
  if (pos != s.size()) {
    throw FormatError(std::string("labels.csv: bad ") + what + " '" + s + "'");
  }
  return v;
}

}  // namespace

void save_trialset(const TrialSet& set, const fs::path& dir) {
  if (set.trials.empty()) {
    throw EmptyInputError("save_trialset: refusing to write an empty trial set");
  }
  const Eigen::Index c = set.channels();
  const Eigen::Index t = set.samples();
  for (const Trial& tr : set.trials) {
    if (tr.data.rows() != c || tr.data.cols() != t) {
      throw DimensionError("save_trialset: trials have mixed shapes");
    }
  }

  fs::create_directories(dir);

  json manifest;
  manifest["subject_id"] = set.subject_id;
  manifest["session_id"] = set.session_id;
  manifest["fs_hz"] = set.fs_hz;
  manifest["channels"] = c;
  manifest["samples"] = t;
  manifest["n_trials"] = set.trials.size();
  json names = json::object();
  for (const auto& [label, name] : set.class_names) {
    names[std::to_string(label)] = name;
  }
  manifest["class_names"] = names;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  std::string payload;
  payload.reserve(set.trials.size() * static_cast<std::size_t>(c) *
                  static_cast<std::size_t>(t) * 4);
  for (const Trial& tr : set.trials) {
    for (Eigen::Index ch = 0; ch < c; ++ch) {
      for (Eigen::Index s = 0; s < t; ++s) {
        put_f32le(payload, static_cast<float>(tr.data(ch, s)));
      }
    }
  }
  write_file(dir / "data.f32le", payload);

  std::string labels = "trial_index,label\n";
  for (std::size_t n = 0; n < set.trials.size(); ++n) {
    int label = set.trials[n].label;
    if (label == kUnlabeled) continue;
    if (label != -1 && label != 1) {
      throw FormatError("save_trialset: trial " + std::to_string(n) +
                        " has label " + std::to_string(label) +
                        ", expected -1, 1 or unlabeled");
    }
    labels += std::to_string(n) + "," + std::to_string(label) + "\n";
  }
  write_file(dir / "labels.csv", labels);
}

TrialSet load_trialset(const fs::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw FormatError("manifest.json: " + std::string(e.what()));
  }

  TrialSet set;
  std::size_t n_trials = 0;
  Eigen::Index c = 0, t = 0;
  try {
    set.subject_id = manifest.at("subject_id").get<std::string>();
    set.session_id = manifest.at("session_id").get<std::string>();
    set.fs_hz = manifest.at("fs_hz").get<double>();
    c = manifest.at("channels").get<Eigen::Index>();
    t = manifest.at("samples").get<Eigen::Index>();
    n_trials = manifest.at("n_trials").get<std::size_t>();
    for (const auto& [key, value] : manifest.at("class_names").items()) {
      if (key != "-1" && key != "1") {
        throw FormatError("manifest.json: class_names key '" + key +
                          "' is not -1 or 1");
      }
      set.class_names[key == "-1" ? -1 : 1] = value.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw FormatError("manifest.json: " + std::string(e.what()));
  }
  if (set.fs_hz <= 0.0 || c < 2 || t < 2 || n_trials == 0) {
    throw FormatError("manifest.json: invalid dimensions (fs " +
                      std::to_string(set.fs_hz) + ", channels " +
                      std::to_string(c) + ", samples " + std::to_string(t) +
                      ", n_trials " + std::to_string(n_trials) + ")");
  }

  std::string payload = read_file(dir / "data.f32le");
  std::size_t expected = n_trials * static_cast<std::size_t>(c) *
                         static_cast<std::size_t>(t) * 4;
  if (payload.size() != expected) {
    throw FormatError("data.f32le: payload is " +
                      std::to_string(payload.size()) + " bytes, manifest implies " +
                      std::to_string(expected));
  }

  set.trials.resize(n_trials);
  const char* p = payload.data();
  for (std::size_t n = 0; n < n_trials; ++n) {
    Mat data(c, t);
    for (Eigen::Index ch = 0; ch < c; ++ch) {
      for (Eigen::Index s = 0; s < t; ++s) {
        data(ch, s) = static_cast<double>(get_f32le(p));
        p += 4;
      }
    }
    if (!data.allFinite()) {
      throw FormatError("data.f32le: non-finite sample in trial " +
                        std::to_string(n));
    }
    set.trials[n].data = std::move(data);
  }

  std::istringstream labels(read_file(dir / "labels.csv"));
  std::string line;
  bool first = true;
  while (std::getline(labels, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      first = false;
      if (line != "trial_index,label") {
        throw FormatError("labels.csv: bad header '" + line + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw FormatError("labels.csv: missing comma in '" + line + "'");
    }
    long index = parse_long(line.substr(0, comma), "trial index");
    std::string label_text = line.substr(comma + 1);
    if (!label_text.empty() && label_text.front() == '+') {
      label_text.erase(0, 1);
    }
    long label = parse_long(label_text, "label");
    if (label != -1 && label != 1) {
      throw FormatError("labels.csv: label " + std::to_string(label) +
                        " outside {-1, 1}");
    }
    if (index < 0 || static_cast<std::size_t>(index) >= n_trials) {
      throw FormatError("labels.csv: trial index " + std::to_string(index) +
                        " outside [0, " + std::to_string(n_trials) + ")");
    }
    set.trials[static_cast<std::size_t>(index)].label = static_cast<int>(label);
  }
  return set;
}

}  // namespace eegtl
