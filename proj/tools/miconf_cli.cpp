// Command-line front end: interval estimation, sample-size planning,
// sampling simulation, and bound tabulation on top of the miconf headers.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "miconf/bounds.hpp"
#include "miconf/distribution.hpp"
#include "miconf/intervals.hpp"
#include "miconf/io.hpp"
#include "miconf/montecarlo.hpp"

namespace {

using miconf::UnitTag;
using ojson = nlohmann::ordered_json;

constexpr const char* kSchema = "miconf/1";

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

UnitTag parse_unit(const std::string& s) {
  return s == "nats" ? UnitTag::nats : UnitTag::bits;
}

/// Report numbers are rounded to the display precision before serialization;
/// internal computation stays at full precision.
ojson num(double v, int precision) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  return miconf::round_sig(v, precision);
}

ojson load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

/// Accepts the matrix either flat (row-major) or as nested rows.
template <typename T>
std::vector<T> read_matrix(const ojson& m, std::size_t mx, std::size_t my, const char* what) {
  std::vector<T> flat;
  flat.reserve(mx * my);
  if (!m.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  if (!m.empty() && m.front().is_array()) {
    if (m.size() != mx) throw std::invalid_argument(std::string(what) + ": expected mx rows");
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != my)
        throw std::invalid_argument(std::string(what) + ": expected my entries per row");
      for (const auto& v : row) flat.push_back(v.get<T>());
    }
  } else {
    if (m.size() != mx * my)
      throw std::invalid_argument(std::string(what) + ": expected mx*my entries");
    for (const auto& v : m) flat.push_back(v.get<T>());
  }
  return flat;
}

miconf::CountTable counts_from_json(const std::string& path) {
  const ojson j = load_json_file(path);
  if (!j.contains("mx") || !j.contains("my") || !j.contains("counts"))
    throw std::invalid_argument(path + ": counts payload needs mx, my, counts");
  const auto mx = j["mx"].get<std::size_t>();
  const auto my = j["my"].get<std::size_t>();
  return {read_matrix<std::uint64_t>(j["counts"], mx, my, "counts"), mx, my};
}

miconf::JointDistribution joint_from_json(const std::string& path) {
  const ojson j = load_json_file(path);
  if (!j.contains("mx") || !j.contains("my") || !j.contains("probs"))
    throw std::invalid_argument(path + ": joint payload needs mx, my, probs");
  const auto mx = j["mx"].get<std::size_t>();
  const auto my = j["my"].get<std::size_t>();
  return {read_matrix<double>(j["probs"], mx, my, "probs"), mx, my};
}

void emit(const ojson& report) { std::cout << report.dump(2) << '\n'; }

// ---- interval ----

struct IntervalArgs {
  std::string samples, counts, joint;
  std::size_t mx = 0, my = 0;
  double alpha = 0.05;
  std::string method = "both";
  std::string unit = "bits";
  bool clamp = false;
  int precision = 6;
};

void run_interval(const IntervalArgs& a) {
  const int given = (!a.samples.empty()) + (!a.counts.empty()) + (!a.joint.empty());
  if (!a.joint.empty())
    throw std::invalid_argument(
        "a joint distribution alone has no sample count n; provide --samples or --counts");
  if (given != 1)
    throw std::invalid_argument("provide exactly one of --samples or --counts");

  std::optional<miconf::CountTable> counts;
  ojson input;
  if (!a.samples.empty()) {
    if (a.mx < 2 || a.my < 2)
      throw std::invalid_argument("--samples requires --mx and --my (alphabet sizes >= 2)");
    std::ifstream in(a.samples);
    if (!in) throw std::invalid_argument("cannot open " + a.samples);
    counts.emplace(miconf::load_samples_csv(in, a.mx, a.my));
    input = {{"kind", "samples"}, {"path", a.samples}};
  } else {
    counts.emplace(counts_from_json(a.counts));
    input = {{"kind", "counts"}, {"path", a.counts}};
  }

  const UnitTag unit = parse_unit(a.unit);
  std::vector<miconf::Interval> ivs;
  if (a.method == "thm2" || a.method == "both")
    ivs.push_back(miconf::interval_thm2(*counts, a.alpha, unit, a.clamp));
  if (a.method == "thm4" || a.method == "both")
    ivs.push_back(miconf::interval_thm4(*counts, a.alpha, unit, a.clamp));

  ojson out;
  out["schema"] = kSchema;
  out["command"] = "interval";
  out["n"] = counts->n();
  out["mx"] = counts->mx();
  out["my"] = counts->my();
  out["alpha"] = a.alpha;
  out["epsilon"] = num(ivs.front().epsilon_used, a.precision);
  out["mi_empirical"] =
      num(miconf::convert_unit(miconf::mutual_information(*counts), UnitTag::nats, unit),
          a.precision);
  out["unit"] = a.unit;
  out["intervals"] = ojson::array();
  for (const auto& iv : ivs)
    out["intervals"].push_back({{"method", miconf::method_name(iv.method)},
                                {"lower", num(iv.lower, a.precision)},
                                {"upper", num(iv.upper, a.precision)},
                                {"width", num(iv.width(), a.precision)}});
  out["metadata"] = {{"generated_at", iso_timestamp()}, {"input", input},
                     {"method", a.method},             {"clamp", a.clamp},
                     {"precision", a.precision}};
  emit(out);
}

// ---- samplesize ----

struct SampleSizeArgs {
  double gamma = 0.0;
  double alpha = 0.05;
  std::size_t mx = 0, my = 0;
  std::string unit = "bits";
  int precision = 6;
};

void run_samplesize(const SampleSizeArgs& a) {
  const miconf::AlphabetPair alphabet(a.mx, a.my);
  const UnitTag unit = parse_unit(a.unit);
  // Report the admissible range in the caller's unit.
  const double cap_nats = std::log(static_cast<double>(alphabet.mx()));
  const double cap = miconf::convert_unit(cap_nats, UnitTag::nats, unit);
  if (!(a.gamma > 0.0)) throw std::domain_error("gamma must be > 0");
  if (!(a.gamma < cap)) {
    const char* cap_name = unit == UnitTag::bits ? "log2(mx)" : "ln(mx)";
    throw std::domain_error("gamma must be < " + std::string(cap_name) + " = " +
                            miconf::format_sig(cap, 6) + " " + a.unit);
  }

  const auto plan = miconf::sample_size_thm3(
      miconf::convert_unit(a.gamma, unit, UnitTag::nats), a.alpha, alphabet);

  ojson out;
  out["schema"] = kSchema;
  out["command"] = "samplesize";
  out["gamma"] = a.gamma;
  out["unit"] = a.unit;
  out["alpha"] = a.alpha;
  out["mx"] = a.mx;
  out["my"] = a.my;
  out["epsilon"] = num(plan.epsilon_solved, a.precision);
  out["n_required"] = plan.n_required;
  out["metadata"] = {{"generated_at", iso_timestamp()}, {"precision", a.precision}};
  emit(out);
}

// ---- simulate ----

struct SimulateArgs {
  std::string channel = "bsc";
  double ber = -1.0;
  double px = -1.0;
  std::string joint;
  std::uint64_t n = 0;
  std::uint64_t reps = 100000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string emit_cdf;
  std::string unit = "bits";
  int precision = 6;
};

void run_simulate(const SimulateArgs& a) {
  std::optional<miconf::JointDistribution> j;
  ojson source;
  if (!a.joint.empty()) {
    if (a.ber >= 0.0 || a.px >= 0.0)
      throw std::invalid_argument("--joint excludes --ber and --px");
    j.emplace(joint_from_json(a.joint));
    source = {{"kind", "joint"}, {"path", a.joint}};
  } else {
    if (a.channel != "bsc") throw std::invalid_argument("unknown channel: " + a.channel);
    if (a.ber < 0.0 || a.px < 0.0)
      throw std::invalid_argument("--channel bsc requires --ber and --px");
    j.emplace(miconf::bsc_joint(
        {miconf::ChannelKind::bsc, a.ber, miconf::MarginalDistribution({a.px, 1.0 - a.px})}));
    source = {{"kind", "channel"}, {"channel", "bsc"}, {"ber", a.ber}, {"px", a.px}};
  }
  if (!(a.alpha > 0.0 && a.alpha <= 1.0)) throw std::domain_error("alpha must be in (0, 1]");

  const auto cdf = miconf::sampling_cdf(*j, a.n, a.reps, a.seed, a.threads);
  const UnitTag unit = parse_unit(a.unit);
  const double lo = miconf::convert_unit(miconf::quantile(cdf, a.alpha / 2.0), UnitTag::nats, unit);
  const double hi =
      miconf::convert_unit(miconf::quantile(cdf, 1.0 - a.alpha / 2.0), UnitTag::nats, unit);
  const double true_mi =
      miconf::convert_unit(miconf::mutual_information(*j), UnitTag::nats, unit);

  if (!a.emit_cdf.empty()) {
    std::ofstream out(a.emit_cdf);
    if (!out) throw std::invalid_argument("cannot open " + a.emit_cdf + " for writing");
    miconf::write_cdf(out, cdf);
  }

  ojson out;
  out["schema"] = kSchema;
  out["command"] = "simulate";
  out["true_mi"] = num(true_mi, a.precision);
  out["quantile_lower"] = num(lo, a.precision);
  out["quantile_upper"] = num(hi, a.precision);
  out["width"] = num(hi - lo, a.precision);
  out["unit"] = a.unit;
  out["n"] = a.n;
  out["reps"] = a.reps;
  out["alpha"] = a.alpha;
  out["seed"] = a.seed;
  out["generator_id"] = miconf::kGeneratorId;
  out["metadata"] = {{"generated_at", iso_timestamp()},
                     {"source", source},
                     {"threads", a.threads},
                     {"quantile_convention", "lower order statistic"},
                     {"emit_cdf", a.emit_cdf.empty() ? ojson(nullptr) : ojson(a.emit_cdf)},
                     {"precision", a.precision}};
  emit(out);
}

// ---- bound ----

struct BoundArgs {
  std::string grid;
  std::size_t mx = 0, my = 0;
  bool compare_zhang = false;
  int precision = 6;
};

void run_bound(const BoundArgs& a) {
  double start = 0.0, stop = 0.0;
  long count = 0;
  {
    std::istringstream ss(a.grid);
    std::string s1, s2, s3;
    const bool shape_ok = std::getline(ss, s1, ':') && std::getline(ss, s2, ':') &&
                          std::getline(ss, s3) && !s1.empty() && !s2.empty() && !s3.empty();
    char *e1 = nullptr, *e2 = nullptr, *e3 = nullptr;
    if (shape_ok) {
      start = std::strtod(s1.c_str(), &e1);
      stop = std::strtod(s2.c_str(), &e2);
      count = std::strtol(s3.c_str(), &e3, 10);
    }
    const bool parsed = shape_ok && e1 && *e1 == '\0' && *e2 == '\0' && *e3 == '\0';
    if (!parsed || count < 1 || !(start <= stop) || !(start >= 0.0) || !(stop <= 2.0))
      throw std::invalid_argument(
          "malformed --epsilon-grid; expected start:stop:count with 0 <= start <= stop <= 2");
  }

  const miconf::AlphabetPair alphabet(a.mx, a.my);
  const double zhang_hi = miconf::delta_I_zhang_boundary(alphabet);
  std::cout << "epsilon,delta_i";
  if (a.compare_zhang) std::cout << ",delta_i_zhang";
  std::cout << '\n';
  for (long i = 0; i < count; ++i) {
    const double eps =
        count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
    std::cout << miconf::format_sig(eps, a.precision) << ','
              << miconf::format_sig(miconf::delta_I(eps, alphabet), a.precision);
    if (a.compare_zhang) {
      std::cout << ',';
      if (eps <= zhang_hi)
        std::cout << miconf::format_sig(miconf::delta_I_zhang(eps, alphabet), a.precision);
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confidence intervals and sample-size planning for mutual information"};
  app.require_subcommand(1);

  IntervalArgs ia;
  auto* interval = app.add_subcommand("interval", "interval estimate from samples or counts");
  interval->add_option("--samples", ia.samples, "CSV of 1-based x,y label pairs");
  interval->add_option("--counts", ia.counts, "JSON {mx, my, counts} payload");
  interval->add_option("--joint", ia.joint, "JSON {mx, my, probs} payload (rejected: no n)");
  interval->add_option("--mx", ia.mx, "X alphabet size (with --samples)");
  interval->add_option("--my", ia.my, "Y alphabet size (with --samples)");
  interval->add_option("--alpha", ia.alpha, "1 - confidence level")->capture_default_str();
  interval->add_option("--method", ia.method, "thm2, thm4, or both")->capture_default_str()
      ->check(CLI::IsMember({"thm2", "thm4", "both"}));
  interval->add_option("--unit", ia.unit, "bits or nats")->capture_default_str()
      ->check(CLI::IsMember({"bits", "nats"}));
  interval->add_flag("--clamp", ia.clamp, "clamp endpoints to [0, log mx]");
  interval->add_option("--precision", ia.precision, "significant digits in the report")->capture_default_str()
      ->check(CLI::Range(1, 17));
  interval->callback([&] { run_interval(ia); });

  SampleSizeArgs sa;
  auto* samplesize = app.add_subcommand("samplesize", "samples needed for a target half-width");
  samplesize->add_option("--gamma", sa.gamma, "target half-width (in --unit)")->required();
  samplesize->add_option("--alpha", sa.alpha, "1 - confidence level")->capture_default_str();
  samplesize->add_option("--mx", sa.mx, "X alphabet size")->required();
  samplesize->add_option("--my", sa.my, "Y alphabet size")->required();
  samplesize->add_option("--unit", sa.unit, "unit of --gamma: bits or nats")->capture_default_str()
      ->check(CLI::IsMember({"bits", "nats"}));
  samplesize->add_option("--precision", sa.precision, "significant digits in the report")->capture_default_str()
      ->check(CLI::Range(1, 17));
  samplesize->callback([&] { run_samplesize(sa); });

  SimulateArgs ma;
  auto* simulate = app.add_subcommand("simulate", "sampling distribution of the plug-in MI");
  simulate->add_option("--channel", ma.channel, "channel model (bsc)")->capture_default_str();
  simulate->add_option("--ber", ma.ber, "crossover probability in [0, 0.5]");
  simulate->add_option("--px", ma.px, "probability of input symbol 1");
  simulate->add_option("--joint", ma.joint, "JSON {mx, my, probs} to sample instead");
  simulate->add_option("--n", ma.n, "samples per replicate")->required();
  simulate->add_option("--reps", ma.reps, "Monte Carlo replicates")->capture_default_str();
  simulate->add_option("--alpha", ma.alpha, "quantile levels alpha/2 and 1-alpha/2")->capture_default_str();
  simulate->add_option("--seed", ma.seed, "root seed for the replicate substreams")->capture_default_str();
  simulate->add_option("--threads", ma.threads, "worker threads (0 = hardware)")->capture_default_str();
  simulate->add_option("--emit-cdf", ma.emit_cdf, "write the sorted CDF to this file");
  simulate->add_option("--unit", ma.unit, "bits or nats")->capture_default_str()
      ->check(CLI::IsMember({"bits", "nats"}));
  simulate->add_option("--precision", ma.precision, "significant digits in the report")->capture_default_str()
      ->check(CLI::Range(1, 17));
  simulate->callback([&] { run_simulate(ma); });

  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "tabulate the deviation bound over an epsilon grid");
  bound->add_option("--epsilon-grid", ba.grid, "start:stop:count within [0, 2]")->required();
  bound->add_option("--mx", ba.mx, "X alphabet size")->required();
  bound->add_option("--my", ba.my, "Y alphabet size")->required();
  bound->add_flag("--compare-zhang", ba.compare_zhang,
                  "add the comparison bound column (empty outside its validity range)");
  bound->add_option("--precision", ba.precision, "significant digits")->capture_default_str()
      ->check(CLI::Range(1, 17));
  bound->callback([&] { run_bound(ba); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
