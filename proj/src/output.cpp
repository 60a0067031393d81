#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "regretlab/harness.hpp"
#include "regretlab/hash.hpp"

namespace regretlab {

namespace {

std::string num(double v, int precision = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string_view color_of(Algorithm algo) {
  switch (algo) {
    case Algorithm::Ucb: return "#1f77b4";
    case Algorithm::Ulcb: return "#2ca02c";
    case Algorithm::Amb: return "#d62728";
    case Algorithm::RefinedAmb: return "#ff7f0e";
    case Algorithm::Oracle: return "#7f7f7f";
  }
  return "#000000";
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed for '" + path.string() + "'");
  }
}

}  // namespace

std::string series_to_csv(const std::vector<AggregateSeries>& series) {
  std::string out =
      "algorithm,checkpoint,regret_median,regret_p10,regret_p90,normalized_median,normalized_p10,normalized_p90\n";
  for (const auto& s : series) {
    const std::string id(algorithm_id(s.algorithm));
    for (const auto& p : s.points) {
      out += id + ',' + std::to_string(p.checkpoint) + ',' + num(p.regret_median) + ',' + num(p.regret_p10) + ',' +
             num(p.regret_p90) + ',' + num(p.normalized_median) + ',' + num(p.normalized_p10) + ',' +
             num(p.normalized_p90) + '\n';
    }
  }
  return out;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::string out = "algorithm,seed,checkpoint,cumulative_regret\n";
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const std::string prefix = std::string(algorithm_id(r.algorithm)) + ',' + std::to_string(r.seed) + ',';
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
      out += prefix + std::to_string(r.checkpoints[i]) + ',' + num(r.cumulative_regret[i], 17) + '\n';
    }
  }
  return out;
}

std::vector<RunRecord> records_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "algorithm,seed,checkpoint,cumulative_regret") {
    throw std::invalid_argument("records CSV: unexpected header");
  }
  std::vector<RunRecord> out;
  std::map<std::pair<Algorithm, int>, std::size_t> where;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string algo, seed, checkpoint, regret;
    if (!std::getline(row, algo, ',') || !std::getline(row, seed, ',') || !std::getline(row, checkpoint, ',') ||
        !std::getline(row, regret)) {
      throw std::invalid_argument("records CSV: malformed line " + std::to_string(line_no));
    }
    const Algorithm a = parse_algorithm(algo);
    const int sd = std::stoi(seed);
    auto [it, inserted] = where.try_emplace({a, sd}, out.size());
    if (inserted) {
      RunRecord rec;
      rec.algorithm = a;
      rec.seed = sd;
      out.push_back(std::move(rec));
    }
    auto& rec = out[it->second];
    rec.checkpoints.push_back(std::stoll(checkpoint));
    rec.cumulative_regret.push_back(std::stod(regret));
    rec.episodes_completed = rec.checkpoints.back();
  }
  return out;
}

std::string render_svg(const std::vector<AggregateSeries>& series, const std::string& title) {
  constexpr double width = 820, height = 500;
  constexpr double left = 80, right = 180, top = 50, bottom = 60;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  std::int64_t k_max = 1;
  double y_max = 0.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      k_max = std::max(k_max, p.checkpoint);
      y_max = std::max(y_max, p.normalized_p90);
    }
  }
  y_max = y_max > 0.0 ? y_max * 1.05 : 1.0;
  const double log_max = std::max(1.0, std::log10(static_cast<double>(k_max)));
  auto x_of = [&](std::int64_t k) { return left + plot_w * std::log10(static_cast<double>(k)) / log_max; };
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(title) << "</text>\n";

  // Axes, gridlines and ticks.
  os << "<g stroke=\"#cccccc\" stroke-width=\"0.5\">\n";
  for (int d = 0; d <= static_cast<int>(std::floor(log_max)); ++d) {
    const double x = left + plot_w * d / log_max;
    os << "<line x1=\"" << num(x, 6) << "\" y1=\"" << top << "\" x2=\"" << num(x, 6) << "\" y2=\"" << top + plot_h
       << "\"/>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = top + plot_h * i / 5.0;
    os << "<line x1=\"" << left << "\" y1=\"" << num(y, 6) << "\" x2=\"" << left + plot_w << "\" y2=\"" << num(y, 6)
       << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\"" << top + plot_h
     << "\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n";
  os << "</g>\n";
  for (int d = 0; d <= static_cast<int>(std::floor(log_max)); ++d) {
    const double x = left + plot_w * d / log_max;
    os << "<text x=\"" << num(x, 6) << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">10<tspan dy=\"-5\" font-size=\"9\">"
       << d << "</tspan></text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    os << "<text x=\"" << left - 6 << "\" y=\"" << num(y_of(v) + 4, 6) << "\" text-anchor=\"end\">" << num(v, 3)
       << "</text>\n";
  }
  os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">Episodes K</text>\n";
  os << "<text transform=\"translate(20 " << top + plot_h / 2
     << ") rotate(-90)\" text-anchor=\"middle\">Regret / ln(K+1)</text>\n";

  // Percentile bands, then median lines on top.
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    os << "<polygon fill=\"" << color_of(s.algorithm) << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const auto& p : s.points) os << num(x_of(p.checkpoint), 6) << ',' << num(y_of(p.normalized_p90), 6) << ' ';
    for (auto it = s.points.rbegin(); it != s.points.rend(); ++it) {
      os << num(x_of(it->checkpoint), 6) << ',' << num(y_of(it->normalized_p10), 6) << ' ';
    }
    os << "\"/>\n";
  }
  for (const auto& s : series) {
    if (s.points.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << color_of(s.algorithm) << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& p : s.points) os << num(x_of(p.checkpoint), 6) << ',' << num(y_of(p.normalized_median), 6) << ' ';
    os << "\"/>\n";
  }

  // Legend.
  double ly = top + 10;
  for (const auto& s : series) {
    const double lx = left + plot_w + 20;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
       << color_of(s.algorithm) << "\" stroke-width=\"3\"/>\n";
    os << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">" << xml_escape(algorithm_label(s.algorithm))
       << "</text>\n";
    ly += 20;
  }
  os << "</svg>\n";
  return os.str();
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json algos = nlohmann::json::array();
  for (const auto& spec : config.algorithms) {
    const bool theory = spec.config.iota.kind == IotaMode::Kind::Theoretical;
    algos.push_back({
        {"id", algorithm_id(spec.algorithm)},
        {"iota_mode", theory ? "theory" : "const"},
        {theory ? "p" : "iota", spec.config.iota.value},
        {"iota", spec.config.iota.resolve(config.scale.S, config.scale.A, static_cast<double>(config.T()))},
        {"bonus_c", spec.config.bonus_c},
        {"tie_break", "lowest-index"},
    });
  }
  nlohmann::json seeds = nlohmann::json::array();
  for (int i = 0; i < config.seeds; ++i) seeds.push_back(i);
  return {
      {"preset", config.preset},
      {"H", config.scale.H},
      {"S", config.scale.S},
      {"A", config.scale.A},
      {"K", config.scale.K},
      {"T", config.T()},
      {"mdp_seed", config.mdp_seed},
      {"seeds", seeds},
      {"algorithms", algos},
      {"checkpoints", config.schedule().size()},
      {"initial_states", config.initial_states},
  };
}

OutputFiles emit_outputs(const std::vector<AggregateSeries>& series, const std::vector<RunRecord>& records,
                         const ExperimentConfig& config, const TabularMdp& mdp, const std::string& directory) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("output directory '" + directory + "' is not writable");
  }

  std::string title = "Regret, (H,S,A) = (" + std::to_string(config.scale.H) + "," + std::to_string(config.scale.S) +
                      "," + std::to_string(config.scale.A) + ")";
  const std::vector<std::pair<std::string, std::string>> files = {
      {"regret.csv", series_to_csv(series)},
      {"records.csv", records_to_csv(records)},
      {"regret.svg", render_svg(series, title)},
      {"mdp.json", mdp_to_json(mdp).dump() + "\n"},
  };

  OutputFiles out{directory, {}};
  nlohmann::json hashes = nlohmann::json::object();
  for (const auto& [name, content] : files) {
    write_file(dir / name, content);
    const std::string sha = git_blob_sha1(content);
    hashes[name] = sha;
    out.hashes.emplace_back(name, sha);
  }

  nlohmann::json runs = nlohmann::json::array();
  std::string timing = "algorithm,seed,wall_seconds,episodes\n";
  for (const auto& r : records) {
    nlohmann::json run = {{"algorithm", algorithm_id(r.algorithm)},
                          {"seed", r.seed},
                          {"episodes", r.episodes_completed},
                          {"tables_digest", hex64(r.digest)}};
    if (config.check_confidence_bounds) run["bound_violations"] = r.bound_violations;
    if (!r.ok()) run["error"] = r.error;
    runs.push_back(std::move(run));
    timing += std::string(algorithm_id(r.algorithm)) + ',' + std::to_string(r.seed) + ',' + num(r.wall_seconds, 6) +
              ',' + std::to_string(r.episodes_completed) + '\n';
  }
  const nlohmann::json manifest = {
      {"tool", "regretlab"},
      {"config", config_to_json(config)},
      {"files", hashes},
      {"runs", runs},
  };
  const std::string manifest_text = manifest.dump(2) + "\n";
  write_file(dir / "manifest.json", manifest_text);
  out.hashes.emplace_back("manifest.json", git_blob_sha1(manifest_text));
  write_file(dir / "timing.csv", timing);
  return out;
}

}  // namespace regretlab
