// qdisc: trace-norm discord of two-qubit states from the command line.
//
//   qdisc compute FILE... [--certify] [--grid N] [--tol X] [--seed S] [--format json|csv]
//   qdisc sweep --family NAME --range P=a:b:step ... [--fixed P=v ...] [--format csv|json] [--out FILE]
//   qdisc certify [--states N] [--seed S] [--grid N] [--tol X] [--format text|json]
//
// Exit codes: 0 success, 2 invalid input, 3 certification failure.

#include "cli_support.hpp"

#include "qdisc/discord.hpp"
#include "qdisc/families.hpp"
#include "qdisc/io.hpp"
#include "qdisc/oracle.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace qdisc;

constexpr int kExitInvalid = 2;
constexpr int kExitCertification = 3;

struct ComputeFlags {
  std::vector<std::string> files;
  bool certify = false;
  int grid = 20000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool timing = false;
  unsigned jobs = 0;
};

struct ComputeOutcome {
  std::optional<ResultRecord> record;
  std::string error;
  int code = 0;
};

int run_compute(const ComputeFlags& fl) {
  struct Item {
    StateEntry entry;
    std::string parse_error;
  };
  std::vector<Item> items;
  int code = 0;
  for (const auto& path : fl.files) {
    try {
      for (auto& e : read_state_file(path)) items.push_back({std::move(e), ""});
    } catch (const ParseError& ex) {
      items.push_back({StateEntry{path, std::nullopt, std::nullopt}, ex.what()});
    }
  }

  const auto outcomes = cli::parallel_map<ComputeOutcome>(
      items.size(), fl.jobs ? fl.jobs : cli::default_jobs(), [&](std::size_t i) {
        ComputeOutcome out;
        const Item& it = items[i];
        if (!it.parse_error.empty()) {
          out.error = it.parse_error;
          out.code = kExitInvalid;
          return out;
        }
        try {
          const auto t0 = std::chrono::steady_clock::now();
          const BlochForm b = entry_bloch(it.entry);
          const DiscordResult r = discord_d1(b);
          ResultRecord rec = make_record(it.entry.id, r);
          if (fl.certify) {
            CertifyOptions opt;
            opt.grid.n_points = fl.grid;
            opt.tol = fl.tol;
            const CertificationReport rep = certify(b, opt);
            rec.oracle = rep.oracle.min_value;
            if (!rep.passed) {
              out.error = it.entry.id + ": CertificationFailure: " + rep.summary();
              out.code = kExitCertification;
            }
          }
          if (fl.timing)
            rec.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          out.record = rec;
        } catch (const ValidationError& ex) {
          out.error = it.entry.id + ": " + ex.what();
          out.code = kExitInvalid;
        } catch (const InternalConsistencyError& ex) {
          out.error = it.entry.id + ": InternalConsistencyError: " + ex.what();
          out.code = kExitCertification;
        }
        return out;
      });

  nlohmann::json arr = nlohmann::json::array();
  if (fl.format == "csv") std::cout << csv_header() << '\n';
  for (const auto& o : outcomes) {
    if (!o.error.empty()) std::cerr << o.error << '\n';
    // Validation failures take precedence over certification failures.
    if (o.code == kExitInvalid || (o.code == kExitCertification && code == 0)) code = o.code;
    if (!o.record) continue;
    if (fl.format == "csv") std::cout << csv_row(*o.record) << '\n';
    else arr.push_back(to_json(*o.record));
  }
  if (fl.format != "csv") std::cout << arr.dump(2) << '\n';
  return code;
}

struct SweepFlags {
  std::string family;
  std::vector<std::string> ranges;
  std::vector<std::string> fixed;
  std::string format = "csv";
  std::string out;
};

int run_sweep(const SweepFlags& fl) {
  const Family fam = family_from_name(fl.family);
  std::vector<cli::Range> ranges;
  for (const auto& r : fl.ranges) ranges.push_back(cli::parse_range(r));
  std::map<std::string, double> fixed;
  for (const auto& f : fl.fixed) fixed.insert(cli::parse_fixed(f));

  // Cartesian product, first range varying slowest.
  std::vector<std::map<std::string, double>> points{fixed};
  for (const auto& r : ranges) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& p : points)
      for (double v : r.values()) {
        auto q = p;
        q[r.param] = v;
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  std::vector<std::string> names;
  for (const auto& r : ranges) names.push_back(r.param);
  for (const auto& [k, _] : fixed)
    if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);

  struct Row {
    std::map<std::string, double> params;
    std::string status;
    std::optional<DiscordResult> result;
  };
  const auto rows = cli::parallel_map<Row>(points.size(), cli::default_jobs(), [&](std::size_t i) {
    Row row{points[i], "ok", std::nullopt};
    try {
      const TwoQubitState s = make_family(FamilySpec{fam, points[i]});
      row.result = discord_d1(to_bloch(validate_state(s.rho)));
    } catch (const ValidationError& ex) {
      row.status = "skipped";
    } catch (const InternalConsistencyError& ex) {
      row.status = "inconsistent";
    }
    return row;
  });

  std::ofstream file;
  if (!fl.out.empty()) {
    file.open(fl.out);
    if (!file) throw std::runtime_error("cannot open " + fl.out + " for writing");
  }
  std::ostream& os = fl.out.empty() ? std::cout : file;
  if (fl.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : rows) {
      nlohmann::json j;
      for (const auto& n : names) j[n] = row.params.at(n);
      j["status"] = row.status;
      if (row.result) {
        j["D1"] = row.result->d1_value;
        j["D2"] = row.result->d2_value;
        j["lower_bound"] = row.result->lower_bound;
        j["branch"] = to_string(row.result->branch);
      }
      arr.push_back(j);
    }
    os << arr.dump(2) << '\n';
  } else {
    for (const auto& n : names) os << n << ',';
    os << "D1,D2,lower_bound,branch,status\n";
    os << std::setprecision(17);
    for (const auto& row : rows) {
      for (const auto& n : names) os << row.params.at(n) << ',';
      if (row.result)
        os << row.result->d1_value << ',' << row.result->d2_value << ',' << row.result->lower_bound << ','
           << to_string(row.result->branch);
      else
        os << ",,,";
      os << ',' << row.status << '\n';
    }
  }
  return 0;
}

struct CertifyFlags {
  int states = 500;
  std::uint64_t seed = 20240601;
  int grid = 20000;
  double tol = 1e-6;
  std::string format = "text";
  unsigned jobs = 0;
};

int run_certify(const CertifyFlags& fl) {
  struct Case {
    std::string name;
    BlochForm b;
    std::optional<double> expected;
  };
  std::vector<Case> cases;
  for (const auto& f : cli::fixtures()) cases.push_back({"fixture " + f.name, f.bloch, f.expected});
  std::mt19937_64 rng(fl.seed);
  for (int i = 0; i < fl.states; ++i)
    cases.push_back({"random #" + std::to_string(i), to_bloch(random_ginibre_state(rng)), std::nullopt});

  struct Outcome {
    double closed = 0.0, oracle = 0.0, deviation = 0.0;
    std::string branch, error;
    bool passed = false;
  };
  const auto results = cli::parallel_map<Outcome>(
      cases.size(), fl.jobs ? fl.jobs : cli::default_jobs(), [&](std::size_t i) {
        Outcome o;
        CertifyOptions opt;
        opt.grid.n_points = fl.grid;
        opt.tol = fl.tol;
        try {
          const CertificationReport rep = certify(cases[i].b, opt);
          o.closed = rep.closed.d1_value;
          o.oracle = rep.oracle.min_value;
          o.deviation = rep.deviation;
          o.branch = to_string(rep.closed.branch);
          o.passed = rep.passed;
          if (cases[i].expected && std::abs(*cases[i].expected - o.closed) > fl.tol) {
            o.passed = false;
            o.error = "known value " + std::to_string(*cases[i].expected);
          }
        } catch (const InternalConsistencyError& ex) {
          o.error = ex.what();
        }
        return o;
      });

  int failures = 0;
  double max_dev = 0.0;
  nlohmann::json fails = nlohmann::json::array();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& o = results[i];
    max_dev = std::max(max_dev, o.deviation);
    if (o.passed) continue;
    ++failures;
    fails.push_back({{"case", cases[i].name}, {"closed", o.closed}, {"oracle", o.oracle},
                     {"deviation", o.deviation}, {"branch", o.branch}, {"note", o.error}});
  }
  if (fl.format == "json") {
    nlohmann::json j = {{"seed", fl.seed},       {"states", fl.states}, {"fixtures", cases.size() - fl.states},
                        {"grid", fl.grid},       {"tol", fl.tol},       {"max_deviation", max_dev},
                        {"failures", failures},  {"failing_cases", fails}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << std::setprecision(6);
    std::cout << "seed " << fl.seed << ", " << fl.states << " random states + " << cases.size() - fl.states
              << " fixtures, grid " << fl.grid << ", tol " << fl.tol << '\n';
    std::cout << "max deviation " << max_dev << ", failures " << failures << '\n';
    for (const auto& f : fails)
      std::cout << "FAIL " << f["case"].get<std::string>() << ": closed " << f["closed"].get<double>() << " oracle "
                << f["oracle"].get<double>() << " (" << f["branch"].get<std::string>() << ") "
                << f["note"].get<std::string>() << '\n';
  }
  return failures ? kExitCertification : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-norm geometric discord of two-qubit states"};
  app.require_subcommand(1);

  ComputeFlags cf;
  auto* compute = app.add_subcommand("compute", "D1, D2 and bounds for states read from files");
  compute->add_option("files", cf.files, "state files (JSON)")->required();
  compute->add_flag("--certify", cf.certify, "cross-check against the grid oracle");
  compute->add_option("--grid", cf.grid, "oracle grid size")->check(CLI::Range(1000, 100000000));
  compute->add_option("--tol", cf.tol, "certification tolerance");
  compute->add_option("--seed", cf.seed, "seed (recorded; computation is deterministic)");
  compute->add_option("--format", cf.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  compute->add_flag("--timing", cf.timing, "record wall time per state (makes output non-deterministic)");
  compute->add_option("--jobs", cf.jobs, "worker threads (default: all cores)");

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "tabulate D1 over a family parameter grid");
  sweep->add_option("--family", sf.family, "family name")->required();
  sweep->add_option("--range", sf.ranges, "P=a:b:step (repeatable)");
  sweep->add_option("--fixed", sf.fixed, "P=v (repeatable)");
  sweep->add_option("--format", sf.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  sweep->add_option("--out", sf.out, "output file (default stdout)");

  CertifyFlags cef;
  auto* cert = app.add_subcommand("certify", "closed form against the oracle on random states and fixtures");
  cert->add_option("--states", cef.states, "number of random states")->check(CLI::NonNegativeNumber);
  cert->add_option("--seed", cef.seed, "random seed");
  cert->add_option("--grid", cef.grid, "oracle grid size")->check(CLI::Range(1000, 100000000));
  cert->add_option("--tol", cef.tol, "tolerance on |closed - oracle|");
  cert->add_option("--format", cef.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cert->add_option("--jobs", cef.jobs, "worker threads (default: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*compute) return run_compute(cf);
    if (*sweep) return run_sweep(sf);
    if (*cert) return run_certify(cef);
  } catch (const UnknownFamily& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  } catch (const UnknownParameter& e) {
    std::cerr << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
