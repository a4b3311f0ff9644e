#include "eegtl/report.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <utility>

#include "eegtl/errors.hpp"

namespace eegtl {

namespace {

void check_field(const char* column, const std::string& value) {
  if (value.find_first_of(",\"\r\n") != std::string::npos) {
    throw InvalidArgumentError(std::string("write_results_csv: ") + column +
                               " '" + value + "' contains a delimiter");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Recovers the count a token like "csp20" or "relieff6" appends to its
// name; false when the token is the bare name or something else entirely.
bool trailing_count(const std::string& token, const std::string& name,
                    int* count) {
  if (token.size() <= name.size() || token.compare(0, name.size(), name) != 0)
    return false;
  int value = 0;
  for (std::size_t i = name.size(); i < token.size(); ++i) {
    const char c = token[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  *count = value;
  return true;
}

}  // namespace

void write_results_csv(std::ostream& out,
                       const std::vector<RunResult>& results) {
  out << kResultsCsvHeader << '\n';
  out << std::setprecision(17);
  for (const RunResult& r : results) {
    check_field("dataset", r.dataset);
    check_field("target_subject", r.target_subject);
    out << r.dataset << ',' << r.target_subject << ',' << r.config.id() << ','
        << to_string(r.config.align) << ',' << to_string(r.config.spatial)
        << ',' << to_string(r.config.select) << ',' << to_string(r.config.clf)
        << ',' << to_string(r.config.mode) << ','
        << to_string(r.config.transfer) << ',' << r.n_l << ',' << r.repeat
        << ',' << r.seed << ',' << r.accuracy << '\n';
  }
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<RunResult>& results) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw FormatError("cannot open " + path.string() + " for writing");
  }
  write_results_csv(out, results);
  out.flush();
  if (!out) {
    throw FormatError("write failed for " + path.string());
  }
}

std::vector<RunResult> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError("results csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsCsvHeader) {
    throw FormatError("results csv: bad header '" + line + "'");
  }
  std::vector<RunResult> results;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 13) {
      throw FormatError("results csv: row " + std::to_string(row) + " has " +
                        std::to_string(f.size()) + " fields, expected 13");
    }
    RunResult r;
    try {
      r.dataset = f[0];
      r.target_subject = f[1];
      r.config.align = align_kind_from(f[3]);
      r.config.spatial = spatial_method_from(f[4]);
      r.config.select = select_kind_from(f[5]);
      r.config.clf = classifier_kind_from(f[6]);
      r.config.mode = align_mode_from(f[7]);
      r.config.transfer = transfer_kind_from(f[8]);
      r.n_l = std::stoi(f[9]);
      r.repeat = std::stoi(f[10]);
      r.seed = std::stoull(f[11]);
      r.accuracy = std::stod(f[12]);
    } catch (const Error& e) {
      throw FormatError("results csv: row " + std::to_string(row) + ": " +
                        e.what());
    } catch (const std::exception&) {
      throw FormatError("results csv: row " + std::to_string(row) +
                        " has a malformed number in '" + line + "'");
    }
    // The id encodes the non-default filter and selection counts; rebuild
    // them so r.config.id() reproduces the column.
    for (const std::string& token : split(f[2], '-')) {
      int count = 0;
      if (trailing_count(token, to_string(r.config.spatial), &count)) {
        r.config.n_filters = count / 2;
      } else if (r.config.select != SelectKind::None &&
                 trailing_count(token, to_string(r.config.select), &count)) {
        r.config.select_m = count;
      }
    }
    if (r.config.id() != f[2]) {
      throw FormatError("results csv: row " + std::to_string(row) +
                        ": config id '" + f[2] +
                        "' does not match the factored columns");
    }
    if (r.n_l < 0 || r.repeat < 0 || !std::isfinite(r.accuracy) ||
        r.accuracy < 0.0 || r.accuracy > 1.0) {
      throw FormatError("results csv: row " + std::to_string(row) +
                        " has an out-of-range value in '" + line + "'");
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<RunResult> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  return read_results_csv(in);
}

std::vector<ConfigSummary> summarize(const std::vector<RunResult>& results,
                                     const std::string& baseline) {
  struct RepeatAcc {
    double sum = 0.0;
    int n = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, std::map<int, RepeatAcc>> by_config;
  for (const RunResult& r : results) {
    if (r.n_l < 4) continue;
    const std::string id = r.config.id();
    auto [it, inserted] = by_config.try_emplace(id);
    if (inserted) order.push_back(id);
    RepeatAcc& acc = it->second[r.repeat];
    acc.sum += r.accuracy;
    acc.n += 1;
  }

  std::vector<ConfigSummary> summaries;
  summaries.reserve(order.size());
  for (const std::string& id : order) {
    const std::map<int, RepeatAcc>& repeats = by_config[id];
    ConfigSummary s;
    s.config_id = id;
    double sum = 0.0;
    std::vector<double> means;
    means.reserve(repeats.size());
    for (const auto& [repeat, acc] : repeats) {
      const double mean = acc.sum / acc.n;
      means.push_back(mean);
      sum += mean;
      s.n_cells += acc.n;
    }
    s.n_repeats = static_cast<int>(means.size());
    s.mean_accuracy = sum / s.n_repeats;
    if (means.size() > 1) {
      double ss = 0.0;
      for (double m : means) {
        ss += (m - s.mean_accuracy) * (m - s.mean_accuracy);
      }
      s.std_accuracy = std::sqrt(ss / (means.size() - 1));
    }
    summaries.push_back(std::move(s));
  }

  const ConfigSummary* base = nullptr;
  for (const ConfigSummary& s : summaries) {
    if (s.config_id == baseline) base = &s;
  }
  if (base == nullptr) {
    throw InvalidArgumentError("summarize: missing baseline config '" +
                               baseline + "'");
  }
  if (base->mean_accuracy == 0.0) {
    throw NumericError("summarize: baseline config '" + baseline +
                       "' has zero mean accuracy");
  }
  for (ConfigSummary& s : summaries) {
    s.improvement_pct = 100.0 * (s.mean_accuracy - base->mean_accuracy) /
                        base->mean_accuracy;
  }
  return summaries;
}

TTestReport config_ttest(const std::vector<RunResult>& results,
                         const std::string& config_a,
                         const std::string& config_b, double alpha) {
  using Key = std::tuple<std::string, std::string, int, int>;
  std::map<Key, double> acc_a;
  std::map<Key, double> acc_b;
  for (const RunResult& r : results) {
    const std::string id = r.config.id();
    const Key key{r.dataset, r.target_subject, r.n_l, r.repeat};
    // Both branches run when the two ids are equal, pairing the config
    // against itself.
    for (std::map<Key, double>* acc :
         {id == config_a ? &acc_a : nullptr,
          id == config_b ? &acc_b : nullptr}) {
      if (acc == nullptr) continue;
      if (!acc->emplace(key, r.accuracy).second) {
        throw InvalidArgumentError(
            "config_ttest: duplicate cell (" + r.dataset + ", " +
            r.target_subject + ", " + std::to_string(r.n_l) + ", " +
            std::to_string(r.repeat) + ") for config '" + id + "'");
      }
    }
  }
  if (acc_a.empty()) {
    throw InvalidArgumentError("config_ttest: no results for config '" +
                               config_a + "'");
  }
  if (acc_b.empty()) {
    throw InvalidArgumentError("config_ttest: no results for config '" +
                               config_b + "'");
  }
  std::vector<double> a;
  std::vector<double> b;
  for (const auto& [key, value] : acc_a) {
    const auto it = acc_b.find(key);
    if (it == acc_b.end()) continue;
    a.push_back(value);
    b.push_back(it->second);
  }
  return paired_ttest(a, b, alpha);
}

}  // namespace eegtl
