// Command-line front end: instance generation, exact probabilities and
// tables, sampling runs, photon statistics, and the scattershot reduction.
// Exit codes: 0 success, 2 input error, 3 verification failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbs/gaussian.hpp"
#include "gbs/io.hpp"
#include "gbs/oracle.hpp"
#include "gbs/photon_stats.hpp"
#include "gbs/probability.hpp"
#include "gbs/sampler.hpp"
#include "gbs/sbs.hpp"

namespace {

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device entropy;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
  std::cerr << "seed: " << drawn << "\n";
  return drawn;
}

gbs::PhotonPattern parse_pattern(const std::string& text) {
  gbs::PhotonPattern pattern;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (...) {
      throw std::runtime_error("pattern: '" + item + "' is not an integer");
    }
    if (used != item.size() || value < 0) {
      throw std::runtime_error("pattern: '" + item + "' is not a non-negative integer");
    }
    pattern.push_back(value);
  }
  if (pattern.empty()) throw std::runtime_error("pattern: empty");
  return pattern;
}

// Squeezing spec: a constant, a comma list, or modal:<pairs>, which picks the
// r whose modal photon-pair number is exactly <pairs> for this mode count.
Eigen::VectorXd parse_squeezing(const std::string& spec, Eigen::Index modes) {
  const std::string modal_prefix = "modal:";
  if (spec.rfind(modal_prefix, 0) == 0) {
    const std::string arg = spec.substr(modal_prefix.size());
    long pairs = 0;
    try {
      pairs = std::stol(arg);
    } catch (...) {
      throw std::runtime_error("squeeze spec: modal pair count '" + arg + "' is not an integer");
    }
    if (pairs < 1) throw std::runtime_error("squeeze spec: modal pair count must be positive");
    if (modes <= 2) {
      throw std::runtime_error("squeeze spec: modal inversion needs at least 3 modes");
    }
    // midpoint of the floor window: (K/2 - 1) sinh^2 r = pairs + 1/2
    const double sinh2 = (pairs + 0.5) / (0.5 * modes - 1.0);
    const double r = std::asinh(std::sqrt(sinh2));
    return Eigen::VectorXd::Constant(modes, r);
  }
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (...) {
      throw std::runtime_error("squeeze spec: '" + item + "' is not a number");
    }
  }
  if (values.size() == 1) {
    return Eigen::VectorXd::Constant(modes, values[0]);
  }
  if (static_cast<Eigen::Index>(values.size()) != modes) {
    throw std::runtime_error("squeeze spec: need one value or one value per mode");
  }
  Eigen::VectorXd r(modes);
  for (Eigen::Index j = 0; j < modes; ++j) r(j) = values[j];
  return r;
}

std::string format_probability(double p) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.15g", p);
  std::string text = buffer;
  if (text.find('.') == std::string::npos &&
      text.find('e') == std::string::npos &&
      text.find("inf") == std::string::npos &&
      text.find("nan") == std::string::npos) {
    text += ".0";
  }
  return text;
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write output file: " + path);
  os << payload;
}

struct GenOptions {
  int modes = 0;
  std::optional<std::uint64_t> seed;
  std::string squeeze = "0";
  std::string out;
};

struct ProbOptions {
  std::string in;
  std::string pattern;
  bool verify = false;
};

struct TableOptions {
  std::string in;
  int n_max = 8;
  int per_mode_max = -1;
  std::string out;
};

struct SampleOptions {
  std::string in;
  int shots = 0;
  std::string method = "enumerate";
  std::optional<std::uint64_t> seed;
  int n_max = 10;
  int per_mode_max = -1;
  std::string out;
};

struct DistOptions {
  int sources = 0;
  double r = 0.0;
};

struct RatesOptions {
  int sources = 0;
  int pairs = 0;
};

struct BreakEvenOptions {
  int min_n = 2;
  int max_n = 60;
};

struct SbsBuildOptions {
  int modes = 0;
  double r = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct SbsCheckOptions {
  int modes = 2;
  double r = -1.0;
  std::optional<std::uint64_t> seed;
  int max_n = 2;
  std::string in;
};

void run_gen(const GenOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  gbs::GbsInstance inst;
  inst.unitary = gbs::haar_unitary(opt.modes, seed);
  inst.squeezing = parse_squeezing(opt.squeeze, opt.modes);
  inst.validate();
  std::ostringstream payload;
  gbs::write_instance(payload, inst, seed);
  write_output(opt.out, payload.str());
}

void run_prob(const ProbOptions& opt) {
  const gbs::LoadedInstance loaded = gbs::read_instance_file(opt.in);
  loaded.instance.validate();
  const gbs::PhotonPattern pattern = parse_pattern(opt.pattern);
  const gbs::GaussianState state = gbs::build_state(loaded.instance);
  const double p = gbs::pattern_probability(state, pattern);
  std::cout << format_probability(p) << "\n";
  if (opt.verify) {
    const double reference = gbs::oracle_probability(state, pattern);
    const double difference = std::abs(p - reference);
    std::cout << "oracle_difference " << gbs::format_double(difference) << "\n";
    if (difference > 1e-9) {
      throw VerificationFailure("probability differs from the oracle by more than 1e-9");
    }
  }
}

void run_table(const TableOptions& opt) {
  const gbs::LoadedInstance loaded = gbs::read_instance_file(opt.in);
  loaded.instance.validate();
  const gbs::GaussianState state = gbs::build_state(loaded.instance);
  const int per_mode = opt.per_mode_max < 0 ? opt.n_max : opt.per_mode_max;
  const gbs::ProbabilityTable table =
      gbs::enumerate_table(state, opt.n_max, per_mode);
  std::ostringstream payload;
  gbs::write_table(payload, table);
  write_output(opt.out, payload.str());
}

void run_sample(const SampleOptions& opt) {
  const gbs::LoadedInstance loaded = gbs::read_instance_file(opt.in);
  loaded.instance.validate();
  const gbs::GaussianState state = gbs::build_state(loaded.instance);
  gbs::SampleConfig cfg;
  cfg.seed = resolve_seed(opt.seed);
  cfg.n_max = opt.n_max;
  cfg.per_mode_max =
      opt.per_mode_max < 0 ? std::max(1, opt.n_max) : opt.per_mode_max;
  if (opt.method == "enumerate") {
    cfg.method = gbs::SampleConfig::Method::enumerate;
  } else if (opt.method == "chain") {
    cfg.method = gbs::SampleConfig::Method::chain;
  } else {
    throw std::runtime_error("sample: method must be 'enumerate' or 'chain'");
  }
  const gbs::SampleResult result =
      cfg.method == gbs::SampleConfig::Method::enumerate
          ? gbs::sample_enumerate(state, cfg, opt.shots)
          : gbs::sample_chain(state, cfg, opt.shots);
  if (result.aborted > 0) {
    std::cerr << "aborted shots: " << result.aborted << "\n";
  }
  std::ostringstream payload;
  gbs::write_samples(payload, result.samples, cfg.seed);
  write_output(opt.out, payload.str());
}

void run_stats_dist(const DistOptions& opt) {
  std::cout << "nu,probability\n";
  const gbs::ModalMean modal = gbs::modal_and_mean(opt.sources, opt.r);
  double cumulative = 0.0;
  for (int nu = 0; nu <= 1000; ++nu) {
    const double p = gbs::gbs_pair_probability(opt.sources, opt.r, nu);
    std::cout << nu << ',' << gbs::format_double(p) << "\n";
    cumulative += p;
    if (nu > modal.argmax_pairs + 2 && 1.0 - cumulative < 1e-12) break;
  }
}

void run_stats_rates(const RatesOptions& opt) {
  const gbs::RateRatio ratio = gbs::rate_ratio(opt.sources, opt.pairs);
  std::cout << "K,nu,ratio,asymptote\n";
  std::cout << opt.sources << ',' << opt.pairs << ','
            << gbs::format_double(ratio.ratio) << ','
            << gbs::format_double(ratio.asymptote) << "\n";
}

void run_stats_breakeven(const BreakEvenOptions& opt) {
  gbs::write_break_even_csv(std::cout,
                            gbs::break_even_curves(opt.min_n, opt.max_n));
}

void run_sbs_build(const SbsBuildOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  gbs::SbsInstance inst;
  inst.squeezing = opt.r;
  inst.unitary = gbs::haar_unitary(opt.modes, seed);
  inst.validate();
  const gbs::GbsInstance gbs_inst = gbs::sbs_to_gbs(inst);
  std::ostringstream payload;
  gbs::write_instance(payload, gbs_inst, seed);
  write_output(opt.out, payload.str());
}

void run_sbs_check(const SbsCheckOptions& opt) {
  gbs::SbsInstance inst;
  if (!opt.in.empty()) {
    const gbs::LoadedInstance loaded = gbs::read_instance_file(opt.in);
    inst.unitary = loaded.instance.unitary;
    inst.squeezing = opt.r >= 0.0 ? opt.r : loaded.instance.squeezing(0);
  } else {
    inst.unitary = gbs::haar_unitary(opt.modes, resolve_seed(opt.seed));
    inst.squeezing = opt.r >= 0.0 ? opt.r : 0.4;
  }
  const Eigen::Index m = inst.unitary.rows();

  // The check itself is the verdict on the interferometer, so a non-unitary
  // input is a verification failure rather than an input error.
  const double unitarity =
      gbs::inf_norm(inst.unitary.adjoint() * inst.unitary -
                    Eigen::MatrixXcd::Identity(m, m));
  std::cout << "unitarity_residual " << gbs::format_double(unitarity) << "\n";
  if (unitarity > 1e-10) {
    throw VerificationFailure("sampling interferometer is not unitary within 1e-10");
  }

  double max_residual = 0.0;
  long checked = 0;
  const int limit = std::min<int>(opt.max_n, static_cast<int>(m));
  for (int total = 0; total <= limit; ++total) {
    // all {0,1} pattern pairs with `total` photons on each side
    std::vector<gbs::PhotonPattern> patterns;
    gbs::PhotonPattern current(m, 0);
    std::function<void(Eigen::Index, int)> emit = [&](Eigen::Index mode, int left) {
      if (mode == m) {
        if (left == 0) patterns.push_back(current);
        return;
      }
      current[mode] = 0;
      emit(mode + 1, left);
      if (left > 0) {
        current[mode] = 1;
        emit(mode + 1, left - 1);
        current[mode] = 0;
      }
    };
    emit(0, total);
    for (const gbs::PhotonPattern& sample : patterns) {
      for (const gbs::PhotonPattern& herald : patterns) {
        const gbs::BayesCheck check = gbs::bayes_check(inst, sample, herald);
        max_residual = std::max(max_residual, check.residual);
        ++checked;
      }
    }
    std::cout << "photons " << total << " checked " << checked
              << " max_residual " << gbs::format_double(max_residual) << "\n";
  }
  std::cout << "max_residual " << gbs::format_double(max_residual) << "\n";
  if (!(max_residual < 1e-9)) {
    throw VerificationFailure("scattershot equivalence residual exceeds 1e-9");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian boson sampling computation engine"};
  app.require_subcommand(1);

  GenOptions gen_opt;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance file");
  gen->add_option("--modes", gen_opt.modes, "Number of modes")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_opt.seed, "RNG seed (printed if omitted)");
  gen->add_option("--squeeze", gen_opt.squeeze,
                  "Constant, comma list, or modal:<pairs>");
  gen->add_option("--out", gen_opt.out, "Output path (stdout if omitted)");
  gen->callback([&] { run_gen(gen_opt); });

  ProbOptions prob_opt;
  CLI::App* prob = app.add_subcommand("prob", "Exact pattern probability");
  prob->add_option("--in", prob_opt.in, "Instance file")->required();
  prob->add_option("--pattern", prob_opt.pattern,
                   "Comma-separated photon counts")
      ->required();
  prob->add_flag("--verify", prob_opt.verify,
                 "Cross-check against the Taylor-expansion oracle");
  prob->callback([&] { run_prob(prob_opt); });

  TableOptions table_opt;
  CLI::App* table = app.add_subcommand("table", "Truncated probability table");
  table->add_option("--in", table_opt.in, "Instance file")->required();
  table->add_option("--n-max", table_opt.n_max, "Total-photon bound")
      ->check(CLI::NonNegativeNumber);
  table->add_option("--per-mode-max", table_opt.per_mode_max,
                    "Per-mode bound (defaults to n-max)");
  table->add_option("--out", table_opt.out, "Output path (stdout if omitted)");
  table->callback([&] { run_table(table_opt); });

  SampleOptions sample_opt;
  CLI::App* sample = app.add_subcommand("sample", "Draw photon patterns");
  sample->add_option("--in", sample_opt.in, "Instance file")->required();
  sample->add_option("--shots", sample_opt.shots, "Number of shots")
      ->required()
      ->check(CLI::NonNegativeNumber);
  sample->add_option("--method", sample_opt.method, "enumerate or chain");
  sample->add_option("--seed", sample_opt.seed, "RNG seed (printed if omitted)");
  sample->add_option("--n-max", sample_opt.n_max, "Total-photon truncation")
      ->check(CLI::NonNegativeNumber);
  sample->add_option("--per-mode-max", sample_opt.per_mode_max,
                     "Per-mode truncation (defaults to n-max)");
  sample->add_option("--out", sample_opt.out, "Output path (stdout if omitted)");
  sample->callback([&] { run_sample(sample_opt); });

  CLI::App* stats = app.add_subcommand("stats", "Closed-form photon statistics");
  stats->require_subcommand(1);

  DistOptions dist_opt;
  CLI::App* dist = stats->add_subcommand("dist", "Photon-pair distribution CSV");
  dist->add_option("--K", dist_opt.sources, "Number of squeezers")
      ->required()
      ->check(CLI::PositiveNumber);
  dist->add_option("--r", dist_opt.r, "Squeezing parameter")->required();
  dist->callback([&] { run_stats_dist(dist_opt); });

  RatesOptions rates_opt;
  CLI::App* rates = stats->add_subcommand("rates", "PFBS/GBS generation ratio");
  rates->add_option("--K", rates_opt.sources, "Two-mode squeezer count")
      ->required()
      ->check(CLI::PositiveNumber);
  rates->add_option("--nu", rates_opt.pairs, "Photon pairs")
      ->required()
      ->check(CLI::PositiveNumber);
  rates->callback([&] { run_stats_rates(rates_opt); });

  BreakEvenOptions breakeven_opt;
  CLI::App* breakeven =
      stats->add_subcommand("breakeven", "Generation-rate comparison CSV");
  breakeven->add_option("--min-n", breakeven_opt.min_n, "Smallest photon number");
  breakeven->add_option("--max-n", breakeven_opt.max_n, "Largest photon number");
  breakeven->callback([&] { run_stats_breakeven(breakeven_opt); });

  CLI::App* sbs = app.add_subcommand("sbs", "Scattershot reduction");
  sbs->require_subcommand(1);

  SbsBuildOptions sbs_build_opt;
  CLI::App* sbs_build =
      sbs->add_subcommand("build", "Emit the equivalent 2M-mode instance");
  sbs_build->add_option("--modes", sbs_build_opt.modes, "Sampling modes")
      ->required()
      ->check(CLI::PositiveNumber);
  sbs_build->add_option("--r", sbs_build_opt.r, "Common squeezing")->required();
  sbs_build->add_option("--seed", sbs_build_opt.seed,
                        "RNG seed (printed if omitted)");
  sbs_build->add_option("--out", sbs_build_opt.out,
                        "Output path (stdout if omitted)");
  sbs_build->callback([&] { run_sbs_build(sbs_build_opt); });

  SbsCheckOptions sbs_check_opt;
  CLI::App* sbs_check =
      sbs->add_subcommand("check", "Sweep the Bayes equivalence residuals");
  sbs_check->add_option("--modes", sbs_check_opt.modes, "Sampling modes")
      ->check(CLI::PositiveNumber);
  sbs_check->add_option("--r", sbs_check_opt.r, "Common squeezing");
  sbs_check->add_option("--seed", sbs_check_opt.seed,
                        "RNG seed (printed if omitted)");
  sbs_check->add_option("--max-n", sbs_check_opt.max_n, "Largest photon total")
      ->check(CLI::NonNegativeNumber);
  sbs_check->add_option("--in", sbs_check_opt.in,
                        "Instance file supplying the sampling interferometer");
  sbs_check->callback([&] { run_sbs_check(sbs_check_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
