#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ancient/error.hpp"
#include "ancient/runner.hpp"

namespace ancient::runner {

namespace {

using json = nlohmann::ordered_json;

// Shortest decimal that reads back to the same double.
void append_number(std::string& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  out.append(buf, res.ptr);
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("io_error", "cannot open '" + p.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot open '" + p.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error("io_error", "write to '" + p.string() + "' failed");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const std::filesystem::path& p, std::size_t line) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw invalid_argument(p.string() + ":" + std::to_string(line) + ": '" + s + "' is not a number");
  }
  return x;
}

}  // namespace

std::string records_csv(const RunReport& r) {
  const bool with_iso = r.scenario.diag_iso;
  std::string out;
  const auto cols = diagnostics::csv_columns(with_iso);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const auto& rec : r.records) {
    const auto values = diagnostics::csv_values(rec, with_iso);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ',';
      append_number(out, values[i]);
    }
    out += '\n';
  }
  return out;
}

std::string profile_csv(const RunReport& r) {
  std::string out = "t,psi,v\n";
  for (const auto& p : r.profiles) {
    for (std::size_t j = 0; j < p.psi.size(); ++j) {
      append_number(out, p.t);
      out += ',';
      append_number(out, p.psi[j]);
      out += ',';
      append_number(out, p.v[j]);
      out += '\n';
    }
  }
  return out;
}

std::string report_json(const RunReport& r) {
  json j;
  j["scenario"] = json::parse(scenario_to_json(r.scenario));
  j["status"] = r.status;
  j["steps"] = r.steps;
  j["last_good_t"] = r.last_good_t;
  if (!r.failure.empty()) j["failure"] = r.failure;
  j["seed"] = r.scenario.seed;
  j["perturbation_phase"] = r.phase;
  j["estimated_extinction"] = r.estimated_extinction ? json(*r.estimated_extinction) : json(nullptr);
  j["records"] = r.records.size();
  if (!r.oracle_errors.empty()) {
    json errs = json::array();
    for (std::size_t i = 0; i < r.oracle_errors.size(); ++i) {
      errs.push_back({{"t", r.records[i].t}, {"max_rel_error", r.oracle_errors[i]}});
    }
    j["oracle_errors"] = errs;
  }
  json checks = json::array();
  bool all = true;
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"value", number(c.value)},
                      {"tolerance", c.tolerance}, {"detail", c.detail}});
    all = all && c.pass;
  }
  j["checks"] = checks;
  j["all_pass"] = all;
  return j.dump(2) + "\n";
}

void persist(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("io_error", "cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / "records.csv", records_csv(r));
  write_file(dir / "report.json", report_json(r));
  if (!r.profiles.empty()) write_file(dir / "profile.csv", profile_csv(r));
}

std::filesystem::path resolve_output(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("ANCIENT_OUTPUT_ROOT"); root && *root) return std::filesystem::path(root) / p;
  }
  return p;
}

std::string fit_json(const std::filesystem::path& profile, std::optional<double> t, double x_min, double x_max,
                     int samples) {
  std::istringstream in(read_file(profile));
  std::string header;
  if (!std::getline(in, header)) throw invalid_argument(profile.string() + ": empty profile file");
  const auto cols = split(header, ',');
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) {
      throw invalid_argument(profile.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(cols.size()) + " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(to_double(c, profile, lineno));
    rows.push_back(std::move(row));
  }

  std::vector<double> x, w;
  if (cols == std::vector<std::string>{"x", "w"}) {
    for (const auto& r : rows) {
      x.push_back(r[0]);
      w.push_back(r[1]);
    }
  } else if (cols == std::vector<std::string>{"t", "psi", "v"}) {
    if (rows.empty()) throw invalid_argument(profile.string() + ": no profile rows");
    double chosen = rows.back()[0];
    if (t) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& r : rows) {
        if (std::fabs(r[0] - *t) < best) {
          best = std::fabs(r[0] - *t);
          chosen = r[0];
        }
      }
    }
    std::vector<double> v;
    for (const auto& r : rows) {
      if (r[0] == chosen) v.push_back(r[2]);
    }
    const grid::PsiGrid g(static_cast<int>(v.size()));
    const grid::CylinderWindow window(x_min, x_max, samples);
    const auto vc = grid::to_cylinder(v, g, window);
    x = window.nodes();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double ch = std::cosh(x[i]);
      w.push_back(vc[i] * ch * ch);
    }
  } else {
    throw invalid_argument(profile.string() + ": header must be 'x,w' or 't,psi,v'");
  }
  return fit_report_json(ode::fit_rosenau(x, w));
}

std::string merge_reports(const std::vector<std::filesystem::path>& reports) {
  if (reports.empty()) throw invalid_argument("report needs at least one run directory or report.json");
  json runs = json::array();
  json checks = json::array();
  bool all = true;
  for (auto p : reports) {
    if (std::filesystem::is_directory(p)) p /= "report.json";
    json j;
    try {
      j = json::parse(read_file(p));
    } catch (const json::parse_error& e) {
      throw invalid_argument(p.string() + ": " + e.what());
    }
    const auto name = j.at("scenario").at("name").get<std::string>();
    bool run_pass = true;
    for (const auto& c : j.at("checks")) {
      json entry = c;
      entry["run"] = name;
      checks.push_back(entry);
      run_pass = run_pass && c.at("pass").get<bool>();
    }
    runs.push_back({{"name", name}, {"status", j.at("status")}, {"path", p.string()}, {"all_pass", run_pass}});
    all = all && run_pass;
  }
  json out;
  out["runs"] = runs;
  out["checks"] = checks;
  out["all_pass"] = all;
  return out.dump(2) + "\n";
}

}  // namespace ancient::runner
