#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "corpus.hpp"
#include "output.hpp"
#include "wordorder/coding.hpp"
#include "wordorder/conflict.hpp"
#include "wordorder/deplen.hpp"
#include "wordorder/error.hpp"
#include "wordorder/infotheory.hpp"
#include "wordorder/model_io.hpp"
#include "wordorder/random.hpp"
#include "wordorder/rate.hpp"
#include "wordorder/ring.hpp"

namespace wordorder::cli {
namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "csv";
};

Format format_of(const Globals& g) { return g.format == "json" ? Format::json : Format::csv; }

double parse_double(const std::string& text, const std::string& what) {
  const auto trimmed = text.substr(0, text.find_last_not_of(" \t\r") + 1);
  const auto start = trimmed.find_first_not_of(" \t");
  if (start == std::string::npos) throw Error("io", "InputParseError", "empty " + what);
  const std::string s = trimmed.substr(start);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("io", "InputParseError", "cannot read " + what + " from '" + s + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(text);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

// "sym:p" pairs; the last colon separates the probability.
Marginal parse_marginal(const std::vector<std::string>& items) {
  Marginal out;
  for (const auto& item : items) {
    const auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw UsageError("expected symbol:probability, got '" + item + "'");
    }
    out.emplace_back(item.substr(0, colon), parse_double(item.substr(colon + 1), "probability"));
  }
  return out;
}

MarkovChain read_chain(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
    MarkovChain chain{Alphabet(doc.at("states").get<std::vector<std::string>>()),
                      doc.at("initial").get<std::vector<double>>(),
                      doc.at("transition").get<std::vector<std::vector<double>>>()};
    chain.validate();
    return chain;
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", "InputParseError", std::string("bad chain file: ") + e.what());
  }
}

Cell to_cell(const std::set<std::size_t>& s) {
  Cell a = Cell::array();
  for (auto v : s) a.push_back(v);
  return a;
}

Cell to_cell(const std::set<int>& s) {
  Cell a = Cell::array();
  for (auto v : s) a.push_back(v);
  return a;
}

// --- model-based subcommands --------------------------------------------------

struct ModelArgs {
  std::string model;
  std::string target;
  std::vector<std::string> order;
};

void add_model_args(CLI::App* sub, ModelArgs& a, const char* target_flag, const char* target_help) {
  sub->add_option("--model", a.model, "Model file (JSON)")->required();
  sub->add_option(target_flag, a.target, target_help);
  sub->add_option("--order", a.order, "Context roles in production order")->delimiter(',');
}

struct Resolved {
  JointModel model;
  std::string target;
  std::vector<std::string> order;
};

Resolved resolve(const ModelArgs& a) {
  auto model = read_model_file(a.model);
  std::string target = a.target.empty() ? model.roles().front() : a.target;
  model.role_index(target);
  auto order = a.order.empty() ? default_context_order(model, target) : a.order;
  return {std::move(model), std::move(target), std::move(order)};
}

struct PlacementArgs {
  ModelArgs model;
  std::string objective = "uncertainty";
  std::string g;
};

Table placement(const PlacementArgs& a) {
  const auto r = resolve(a.model);
  const auto u = uncertainty_profile(r.model, r.target, r.order);
  const auto p = predictability_profile(r.model, r.target, r.order);
  const auto objective = a.objective == "predictability" ? Objective::predictability : Objective::uncertainty;
  const auto& profile = objective == Objective::uncertainty ? u : p;
  const auto best = a.g.empty()
                        ? optimal_placement(profile)
                        : optimal_placement_with_transducer(profile, CostTransducer::parse(a.g),
                                                            max_entropy(r.model, r.target));
  Table t;
  t.columns = {"i", "H_bits", "I_bits", "in_optimal_set"};
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    t.add_row({i, u.values[i], p.values[i], best.count(i) > 0});
  }
  t.note("target", r.target);
  t.note("objective", a.objective);
  if (!a.g.empty()) t.note("transducer", CostTransducer::parse(a.g).describe());
  t.note("optimal_set", to_cell(best));
  return t;
}

struct ConflictArgs {
  ModelArgs model;
  std::string g;
  std::vector<double> lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
};

Table conflict(const ConflictArgs& a) {
  const auto r = resolve(a.model);
  const auto edge = a.g.empty() ? CostTransducer::identity() : CostTransducer::parse(a.g);
  const auto report = conflict_report(r.model, r.target, r.order, edge);
  const auto front = pareto_front(report);
  std::vector<std::set<int>> optima;
  Table t;
  t.columns = {"head_pos", "dep_cost", "H_bits", "pareto"};
  for (double lambda : a.lambdas) {
    optima.push_back(weighted_optimum(report, lambda));
    t.columns.push_back("opt_lambda=" + format_number(lambda));
  }
  for (const auto& row : report.rows) {
    std::vector<Cell> cells{row.head_pos, row.dependency_cost, row.head_uncertainty,
                            front.count(row.head_pos) > 0};
    for (const auto& o : optima) cells.emplace_back(o.count(row.head_pos) > 0);
    t.add_row(std::move(cells));
  }
  const auto asym = asymmetry_check(report);
  t.note("head", r.target);
  t.note("model_id", report.model_id);
  t.note("dependency_optimal", to_cell(dependency_optimal(report)));
  t.note("uncertainty_optimal", to_cell(uncertainty_optimal(report)));
  t.note("conflict", conflict_present(report));
  t.note("head_last_threshold", head_last_threshold(report));
  t.note("extreme_is_worst_for_dlm", asym.extreme_is_worst_for_dlm);
  t.note("center_is_worst_for_uncertainty", to_string(asym.center_is_worst_for_uncertainty));
  return t;
}

struct DeplenArgs {
  int m = 0;
  std::string g = "identity";
};

Table deplen(const DeplenArgs& a) {
  const auto g = CostTransducer::parse(a.g);
  const auto land = landscape(a.m, g);
  Table t;
  t.columns = {"head_pos", "cost"};
  for (int p = 1; p <= a.m; ++p) t.add_row({p, land.at(p)});
  const auto lo = min_dependency_sum(a.m);
  const auto hi = max_dependency_sum(a.m);
  t.note("transducer", g.describe());
  t.note("min_sum", lo.value);
  t.note("min_at", to_cell(lo.positions));
  t.note("max_sum", hi.value);
  t.note("max_at", to_cell(hi.positions));
  t.note("quasi_convex", land.quasi_convex);
  return t;
}

// --- ring ----------------------------------------------------------------------

struct KernelArgs {
  std::string decay = "exp";
  std::string beta = "1";
  double alpha = 1.0;
  std::vector<double> weights;
  double self_weight = 0.0;
  std::vector<std::string> filters;
};

void add_kernel_args(CLI::App* sub, KernelArgs& k) {
  sub->add_option("--decay", k.decay, "exp, power or table")
      ->check(CLI::IsMember({"exp", "power", "table"}));
  sub->add_option("--beta", k.beta, "Exponential decay rate (inf for nearest neighbours only)");
  sub->add_option("--alpha", k.alpha, "Inverse-power exponent");
  sub->add_option("--weights", k.weights, "Weights for distances 1,2,3")->delimiter(',');
  sub->add_option("--self-weight", k.self_weight, "Weight of staying put");
  sub->add_option("--filter", k.filters, "Filter name[:multiplier], repeatable (default multiplier 2)");
}

RingKernel build_kernel(const KernelArgs& k) {
  RingKernel kernel;
  if (k.decay == "exp") {
    kernel.decay = RingDecay::exponential(parse_double(k.beta, "beta"));
  } else if (k.decay == "power") {
    kernel.decay = RingDecay::inverse_power(k.alpha);
  } else {
    if (k.weights.size() != 3) throw UsageError("--weights needs exactly three values");
    kernel.decay = RingDecay::tabulated({k.weights[0], k.weights[1], k.weights[2]});
  }
  kernel.self_weight = k.self_weight;
  for (const auto& f : k.filters) {
    const auto colon = f.find(':');
    const auto name = f.substr(0, colon);
    const double weight = colon == std::string::npos ? 2.0 : parse_double(f.substr(colon + 1), "multiplier");
    kernel.filters[filter_from_string(name)] = weight;
  }
  kernel.validate();
  return kernel;
}

struct RingArgs {
  std::string from;
  std::string to;
  bool use_ring = false;
  std::string filter;
  KernelArgs kernel;
  std::size_t steps = 1;
  std::size_t ensemble = 10000;
  unsigned workers = 1;
  std::vector<double> distribution;
  std::string config;
};

Table ring_distance_table(const RingArgs& a) {
  Table t;
  t.columns = {"from", "to", "distance"};
  const auto from = order_from_string(a.from);
  if (!a.to.empty()) {
    const auto to = order_from_string(a.to);
    t.add_row({std::string(to_string(from)), std::string(to_string(to)), ring_distance(from, to)});
    return t;
  }
  for (auto o : kAllOrders) {
    t.add_row({std::string(to_string(from)), std::string(to_string(o)), ring_distance(from, o)});
  }
  return t;
}

Table ring_neighbors_table(const RingArgs& a) {
  Table t;
  t.columns = {"order", "neighbor"};
  const auto from = order_from_string(a.from);
  for (auto o : neighbors(from)) {
    t.add_row({std::string(to_string(from)), std::string(to_string(o))});
  }
  return t;
}

Table ring_predict_table(const RingArgs& a) {
  std::optional<Filter> filter;
  if (!a.filter.empty()) filter = filter_from_string(a.filter);
  const auto destinations = predicted_destinations(order_from_string(a.from), a.use_ring, filter);
  Table t;
  t.columns = {"destination"};
  for (auto o : destinations) t.add_row({std::string(to_string(o))});
  return t;
}

std::vector<std::string> order_columns() {
  std::vector<std::string> out;
  for (auto o : kAllOrders) out.emplace_back(to_string(o));
  return out;
}

// Simulation settings from a JSON file. Flags given on the command line win.
void apply_simulation_config(const std::string& path, const CLI::App& sub, const CLI::App& app,
                             RingArgs& a, Globals& g) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
    if (!doc.is_object()) throw Error("io", "InputParseError", "simulation config must be an object");
    auto take = [&](const char* key, const char* flag, auto& field) {
      if (doc.contains(key) && sub.count(flag) == 0) doc.at(key).get_to(field);
    };
    take("from", "--from", a.from);
    take("steps", "--steps", a.steps);
    take("ensemble", "--ensemble", a.ensemble);
    take("workers", "--workers", a.workers);
    take("decay", "--decay", a.kernel.decay);
    take("alpha", "--alpha", a.kernel.alpha);
    take("weights", "--weights", a.kernel.weights);
    take("self_weight", "--self-weight", a.kernel.self_weight);
    if (doc.contains("beta") && sub.count("--beta") == 0) {
      const auto& beta = doc.at("beta");
      a.kernel.beta = beta.is_string() ? beta.get<std::string>() : format_number(beta.get<double>());
    }
    if (doc.contains("filters") && sub.count("--filter") == 0) {
      a.kernel.filters.clear();
      for (const auto& [name, weight] : doc.at("filters").items()) {
        a.kernel.filters.push_back(name + ":" + format_number(weight.get<double>()));
      }
    }
    if (doc.contains("seed") && app.count("--seed") == 0) doc.at("seed").get_to(g.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", "InputParseError", std::string("bad simulation config: ") + e.what());
  }
  if (a.kernel.decay != "exp" && a.kernel.decay != "power" && a.kernel.decay != "table") {
    throw Error("io", "InputParseError", "decay must be exp, power or table");
  }
  if (a.from.empty()) throw UsageError("simulate needs a start order (--from or \"from\" in the config)");
  if (a.ensemble == 0) throw UsageError("ensemble size must be positive");
}

Table ring_simulate_table(const RingArgs& a, const Globals& g) {
  const auto kernel = build_kernel(a.kernel);
  const auto start = order_from_string(a.from);
  const auto traj = evolve(kernel, start, a.steps, a.ensemble, derive_seed(g.seed, "ring.simulate"),
                           std::max(1u, a.workers));
  Table t;
  t.columns = {"step"};
  for (auto& c : order_columns()) t.columns.push_back(c);
  t.columns.push_back("modal");
  for (std::size_t s = 0; s < traj.counts.size(); ++s) {
    std::vector<Cell> row{s};
    for (auto c : traj.counts[s]) row.emplace_back(c);
    row.emplace_back(std::string(to_string(traj.modal(s))));
    t.add_row(std::move(row));
  }
  const auto exact = propagate(transition_matrix(kernel), point_mass(start), a.steps);
  Cell e = Cell::array();
  for (double v : exact) e.push_back(v);
  t.note("ensemble", a.ensemble);
  t.note("seed", g.seed);
  t.note("exact_final_distribution", e);
  return t;
}

Table ring_compare_table(const RingArgs& a) {
  OrderDistribution dist{};
  if (!a.distribution.empty()) {
    if (a.distribution.size() != 6) throw UsageError("--distribution needs six values");
    std::copy(a.distribution.begin(), a.distribution.end(), dist.begin());
  } else {
    if (a.from.empty()) throw UsageError("give --distribution or --from with kernel options");
    dist = propagate(transition_matrix(build_kernel(a.kernel)), point_mass(order_from_string(a.from)),
                     a.steps);
  }
  const auto ref = reference_distribution();
  const auto cmp = compare_to_reference(dist);
  Table t;
  t.columns = {"order", "distribution", "reference"};
  for (auto o : kAllOrders) {
    t.add_row({std::string(to_string(o)), dist[index_of(o)], ref[index_of(o)]});
  }
  int agree = 0;
  for (const auto& r : cmp.ranks) agree += r.agrees ? 1 : 0;
  t.note("total_variation", cmp.total_variation);
  t.note("rank_agreement", std::to_string(agree) + "/" + std::to_string(cmp.ranks.size()));
  return t;
}

Table ring_reference_table() {
  const auto& ref = reference_frequencies();
  Table t;
  t.columns = {"check", "expected", "actual", "ok"};
  bool all = true;
  for (const auto& c : integrity_checks(ref)) {
    t.add_row({c.name, c.expected, c.actual, c.ok});
    all = all && c.ok;
  }
  t.note("total_languages", ref.total_languages);
  t.note("total_families", ref.total_families);
  t.note("all_ok", all);
  return t;
}

// --- rate ----------------------------------------------------------------------

struct RateArgs {
  std::string input;
  std::string model;
  std::string profile;
  bool chars = false;
  bool circular = false;
  std::size_t order = 10;
  std::uint64_t min_windows = 1;
  double coverage_cap = 0.2;
  bool no_cap = false;
  double pseudocount = 0.0;
  double tolerance = 0.05;
  std::size_t band = 0;
  std::string variant = "relaxed";
  HilbergOptions hilberg;
  std::string sequence;
  double uid_tolerance = 1e-9;
};

void add_profile_args(CLI::App* sub, RateArgs& a) {
  auto* in = sub->add_option("--input", a.input, "UTF-8 text corpus");
  auto* mo = sub->add_option("--model", a.model, "Exact joint law over positions (JSON)");
  auto* pr = sub->add_option("--profile", a.profile, "Precomputed profile CSV (i,H_bits)");
  in->excludes(mo)->excludes(pr);
  mo->excludes(pr);
  sub->add_flag("--chars", a.chars, "Character tokens instead of whitespace-separated words");
  sub->add_flag("--circular", a.circular, "Wrap windows around the end of the corpus");
  sub->add_option("--order", a.order, "Largest block order")->check(CLI::PositiveNumber);
  sub->add_option("--min-windows", a.min_windows, "Minimum windows per order");
  sub->add_option("--coverage-cap", a.coverage_cap, "Stop when distinct blocks exceed this share of windows");
  sub->add_flag("--no-cap", a.no_cap, "Disable the coverage cap");
  sub->add_option("--pseudocount", a.pseudocount, "Additive smoothing per block");
}

struct ProfileInput {
  RateProfile profile;
  std::optional<Corpus> corpus;
};

RateProfile read_profile_csv(const std::string& path) {
  RateProfile p;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() < 2) throw Error("io", "InputParseError", "profile rows need i,H_bits");
    if (fields[0] == "i") continue;
    p.values.push_back(parse_double(fields[1], "profile value"));
  }
  return p;
}

ProfileInput load_profile(const RateArgs& a, std::ostream& err) {
  ProfileInput out;
  if (!a.profile.empty()) {
    out.profile = read_profile_csv(a.profile);
  } else if (!a.model.empty()) {
    out.profile = exact_profile(read_model_file(a.model));
  } else if (!a.input.empty()) {
    out.corpus = ingest_corpus(a.input, a.chars ? Tokenization::character : Tokenization::whitespace);
    for (const auto& w : out.corpus->warnings) {
      err << nlohmann::json{{"warning", {{"code", "io.EmptyInput"}, {"message", w}}}}.dump() << '\n';
    }
    ProfileOptions options;
    options.min_windows = a.min_windows;
    options.coverage_cap = a.coverage_cap;
    options.cap_depth = !a.no_cap;
    options.pseudocount = a.pseudocount;
    out.profile =
        conditional_entropy_profile(ngram_counts(out.corpus->tokens, a.order, a.circular), options);
  } else {
    throw UsageError("give one of --input, --model or --profile");
  }
  return out;
}

void profile_rows(Table& t, const RateProfile& p) {
  t.columns = {"i", "H_bits"};
  for (std::size_t i = 1; i <= p.depth(); ++i) t.add_row({i, p.at(i)});
}

void corpus_notes(Table& t, const ProfileInput& in) {
  if (!in.corpus) return;
  t.note("tokens", in.corpus->tokens.size());
  t.note("types", in.corpus->types);
}

Table rate_profile(const RateArgs& a, std::ostream& err) {
  const auto in = load_profile(a, err);
  Table t;
  profile_rows(t, in.profile);
  corpus_notes(t, in);
  t.note("depth", in.profile.depth());
  return t;
}

Table rate_cer(const RateArgs& a, const Globals& g, std::ostream& err) {
  const auto in = load_profile(a, err);
  double tolerance = a.tolerance;
  Table t;
  profile_rows(t, in.profile);
  corpus_notes(t, in);
  if (a.band > 0) {
    if (!in.corpus) throw UsageError("--band needs a corpus given with --input");
    tolerance = iid_noise_band(in.corpus->tokens, in.profile.depth(), a.band,
                               derive_seed(g.seed, "rate.cer.band"));
    t.note("noise_band", tolerance);
  }
  const auto v = cer_diagnostic(in.profile, tolerance);
  t.note("tolerance", tolerance);
  t.note("flat", v.flat);
  t.note("spread", v.spread);
  t.note("max_drop_at", v.max_drop_at);
  t.note("max_drop", v.max_drop);
  t.note("non_increasing", v.non_increasing);
  return t;
}

Table rate_uid(const RateArgs& a) {
  if (a.model.empty()) throw UsageError("rate uid needs --model");
  const auto model = read_model_file(a.model);
  Table t;
  t.columns = {"i", "token", "conditional"};
  auto emit = [&](const UidSequence& s) {
    for (std::size_t i = 0; i < s.sequence.size(); ++i) {
      t.add_row({i + 1, s.sequence[i], s.conditionals[i]});
    }
    t.note("spread", s.spread);
  };
  if (!a.sequence.empty()) {
    const auto tokens = tokenize(a.sequence, a.chars ? Tokenization::character : Tokenization::whitespace);
    const auto s = uid_spread(tokens.tokens, model);
    emit(s);
    t.note("uniform", s.spread <= a.uid_tolerance);
    return t;
  }
  const auto c = uid_classify(model, a.uid_tolerance);
  emit(c.worst);
  t.note("class", to_string(c.kind));
  t.note("support_size", c.support_size);
  t.note("max_spread", c.max_spread);
  return t;
}

Table rate_hilberg(const RateArgs& a, std::ostream& err) {
  const auto in = load_profile(a, err);
  const auto variant = a.variant == "pure" ? HilbergVariant::pure : HilbergVariant::relaxed;
  const auto fit = hilberg_fit(in.profile, variant, a.hilberg);
  Table t;
  t.columns = {"i", "H_bits", "fitted"};
  for (std::size_t i = 1; i <= in.profile.depth(); ++i) {
    t.add_row({i, in.profile.at(i), hilberg_value(fit, static_cast<double>(i))});
  }
  corpus_notes(t, in);
  t.note("variant", a.variant);
  t.note("a", fit.a);
  t.note("gamma", fit.gamma);
  t.note("b", fit.b);
  t.note("rms_residual", fit.rms_residual);
  return t;
}

Table rate_peak(const RateArgs& a, std::ostream& err) {
  const auto in = load_profile(a, err);
  const auto peak = peak_cost(in.profile);
  Table t;
  profile_rows(t, in.profile);
  corpus_notes(t, in);
  t.note("peak_index", peak.index);
  t.note("peak_value", peak.value);
  return t;
}

// --- coding --------------------------------------------------------------------

struct CodingArgs {
  std::string input;
  bool allow_full_reduction = false;
};

Table coding(const CodingArgs& a) {
  std::istringstream in(read_file(a.input));
  std::string line;
  std::vector<std::string> header;
  ContextTable table;
  table.allow_full_reduction = a.allow_full_reduction;
  std::size_t type_col = 0, prob_col = 0;
  std::optional<std::size_t> length_col;
  std::vector<std::size_t> context_cols;
  bool given_lengths = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto fields = split(line, ',');
    for (auto& f : fields) f = trim(f);
    if (header.empty()) {
      header = fields;
      bool has_type = false, has_prob = false;
      for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "type") {
          type_col = i;
          has_type = true;
        } else if (header[i] == "probability") {
          prob_col = i;
          has_prob = true;
        } else if (header[i] == "length") {
          length_col = i;
        } else {
          context_cols.push_back(i);
        }
      }
      if (!has_type || !has_prob) {
        throw Error("io", "InputParseError", "header needs 'type' and 'probability' columns");
      }
      table.order = context_cols.size();
      given_lengths = length_col.has_value();
      continue;
    }
    if (fields.size() != header.size()) {
      throw Error("io", "InputParseError", "row has " + std::to_string(fields.size()) +
                                               " fields, header has " + std::to_string(header.size()));
    }
    ContextEntry e;
    e.target = fields[type_col];
    e.probability = parse_double(fields[prob_col], "probability");
    if (length_col) {
      const double l = parse_double(fields[*length_col], "length");
      if (l < 0 || l != std::floor(l) || l > 1e9) {
        throw Error("io", "InputParseError", "lengths must be non-negative integers");
      }
      e.length = static_cast<std::uint32_t>(l);
    }
    for (auto c : context_cols) e.context.push_back(fields[c]);
    table.entries.push_back(std::move(e));
  }
  if (table.entries.empty()) throw Error("io", "InputParseError", "no rows in coding table");
  if (!given_lengths) {
    std::vector<double> p;
    for (const auto& e : table.entries) p.push_back(e.probability);
    const auto lengths = optimal_lengths(p, a.allow_full_reduction);
    for (std::size_t i = 0; i < lengths.size(); ++i) table.entries[i].length = lengths[i];
  }
  table.validate();

  Table t;
  t.columns = {"type"};
  for (auto c : context_cols) t.columns.push_back(header[c]);
  t.columns.insert(t.columns.end(), {"probability", "length", "ideal_length"});
  std::vector<std::uint32_t> lengths;
  double entropy = 0.0;
  for (const auto& e : table.entries) {
    std::vector<Cell> row{e.target};
    for (const auto& x : e.context) row.emplace_back(x);
    row.emplace_back(e.probability);
    row.emplace_back(e.length);
    row.emplace_back(e.probability > 0 ? ideal_length(e.probability) : std::numeric_limits<double>::infinity());
    t.add_row(std::move(row));
    lengths.push_back(e.length);
    if (e.probability > 0) entropy -= e.probability * std::log2(e.probability);
  }
  const auto verdict = abbreviation_check(table);
  t.note("order", table.order);
  t.note("lengths", given_lengths ? "given" : "optimal");
  t.note("entropy", entropy);
  t.note(table.order == 0 ? "L" : "L_n", contextual_mean_length(table));
  t.note("kraft_sum", kraft_sum(lengths));
  t.note("tau", verdict.tau ? Cell(*verdict.tau) : Cell("undefined (all tied)"));
  t.note("abbreviation", verdict.holds);
  if (table.order > 0) {
    for (const auto& y : table.targets()) {
      t.note("L_n(" + y + ")", per_target_length(table, y));
      const double mass = table.target_mass(y);
      t.note("M_n(" + y + ")", mass > 0 ? Cell(renormalized_length(table, y)) : Cell("undefined"));
    }
  }
  return t;
}

// --- sequences and models -----------------------------------------------------------

struct SourceArgs {
  std::string kind = "iid";
  std::vector<std::string> symbols;
  std::string chain;
  std::string block;
  std::optional<std::size_t> offset;
  std::string symbol;
  std::size_t length = 0;
  std::size_t k = 0;
  std::string reading = "relaxed";
  bool chars = false;
  std::string input;
  std::string out;
};

void add_source_args(CLI::App* sub, SourceArgs& s) {
  sub->add_option("--source", s.kind, "iid, markov, periodic or homogeneous")
      ->check(CLI::IsMember({"iid", "markov", "periodic", "homogeneous"}));
  sub->add_option("--symbols", s.symbols, "iid marginal as sym:p,sym:p,...")->delimiter(',');
  sub->add_option("--chain", s.chain, "Markov chain file (JSON: states, initial, transition)");
  sub->add_option("--block", s.block, "Periodic block, whitespace separated");
  sub->add_option("--offset", s.offset, "Fixed start offset into the periodic block");
  sub->add_option("--symbol", s.symbol, "Symbol of a homogeneous source");
}

SequenceSource build_source(const SourceArgs& s) {
  if (s.kind == "iid") {
    if (s.symbols.empty()) throw UsageError("iid source needs --symbols");
    return SequenceSource::iid(parse_marginal(s.symbols));
  }
  if (s.kind == "markov") {
    if (s.chain.empty()) throw UsageError("markov source needs --chain");
    return SequenceSource::markov(read_chain(s.chain));
  }
  if (s.kind == "periodic") {
    const auto block = tokenize(s.block, Tokenization::whitespace).tokens;
    if (block.empty()) throw UsageError("periodic source needs --block");
    return SequenceSource::periodic(block, s.offset);
  }
  if (s.symbol.empty()) throw UsageError("homogeneous source needs --symbol");
  return SequenceSource::homogeneous(s.symbol);
}

void emit_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("io", "WriteError", "cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Word order and information-theoretic optimization laboratory", "wordorder"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "Master seed for all random streams");
  app.add_option("--format", globals.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  std::function<void()> action;
  auto table_action = [&](auto make) {
    return [&, make] { render(make(), format_of(globals), out); };
  };

  PlacementArgs placement_args;
  auto* sub = app.add_subcommand("placement", "Optimal target placement for a joint model");
  add_model_args(sub, placement_args.model, "--target", "Target role (default: first role)");
  sub->add_option("--objective", placement_args.objective)
      ->check(CLI::IsMember({"uncertainty", "predictability"}));
  sub->add_option("--g", placement_args.g, "Monotone cost transducer");
  sub->callback([&] { action = table_action([&] { return placement(placement_args); }); });

  DeplenArgs deplen_args;
  sub = app.add_subcommand("deplen", "Dependency length landscape of a star tree");
  sub->add_option("--m", deplen_args.m, "Number of words (head plus dependents)")->required();
  sub->add_option("--g", deplen_args.g, "Increasing edge cost (identity, square, exp:<base>, ...)");
  sub->callback([&] { action = table_action([&] { return deplen(deplen_args); }); });

  ConflictArgs conflict_args;
  sub = app.add_subcommand("conflict", "Dependency length versus head uncertainty");
  add_model_args(sub, conflict_args.model, "--head", "Head role (default: first role)");
  sub->add_option("--g", conflict_args.g, "Increasing edge cost");
  sub->add_option("--lambdas", conflict_args.lambdas, "Weights in [0,1] for the weighted optimum")
      ->delimiter(',');
  sub->callback([&] { action = table_action([&] { return conflict(conflict_args); }); });

  RingArgs ring_args;
  auto* ring = app.add_subcommand("ring", "Permutation ring of S, V and O orders");
  ring->require_subcommand(1);
  sub = ring->add_subcommand("distance", "Ring distances");
  sub->add_option("--from", ring_args.from)->required();
  sub->add_option("--to", ring_args.to);
  sub->callback([&] { action = table_action([&] { return ring_distance_table(ring_args); }); });
  sub = ring->add_subcommand("neighbors", "Orders one swap away");
  sub->add_option("--from,--of", ring_args.from)->required();
  sub->callback([&] { action = table_action([&] { return ring_neighbors_table(ring_args); }); });
  sub = ring->add_subcommand("predict", "Qualitative destination prediction");
  sub->add_option("--from", ring_args.from)->required();
  sub->add_flag("--ring", ring_args.use_ring, "Restrict to nearest neighbours on the ring");
  sub->add_option("--filter", ring_args.filter, "dlm, verb_uncertainty, nominal_uncertainty or agent_first");
  sub->callback([&] { action = table_action([&] { return ring_predict_table(ring_args); }); });
  sub = ring->add_subcommand("simulate", "Ensemble of ring random walks");
  sub->add_option("--from", ring_args.from);
  sub->add_option("--steps", ring_args.steps);
  sub->add_option("--ensemble", ring_args.ensemble)->check(CLI::PositiveNumber);
  sub->add_option("--workers", ring_args.workers);
  sub->add_option("--config", ring_args.config, "JSON file with kernel, steps, ensemble and seed");
  add_kernel_args(sub, ring_args.kernel);
  sub->callback([&, sub] {
    action = table_action([&, sub] {
      if (!ring_args.config.empty()) {
        apply_simulation_config(ring_args.config, *sub, app, ring_args, globals);
      } else if (ring_args.from.empty()) {
        throw UsageError("simulate needs --from or --config");
      }
      return ring_simulate_table(ring_args, globals);
    });
  });
  sub = ring->add_subcommand("compare", "Compare a distribution with the reference frequencies");
  sub->add_option("--distribution", ring_args.distribution, "Six values in ring order")->delimiter(',');
  sub->add_option("--from", ring_args.from);
  sub->add_option("--steps", ring_args.steps);
  add_kernel_args(sub, ring_args.kernel);
  sub->callback([&] { action = table_action([&] { return ring_compare_table(ring_args); }); });
  sub = ring->add_subcommand("reference", "Integrity checks of the reference frequencies");
  sub->callback([&] { action = table_action([&] { return ring_reference_table(); }); });

  RateArgs rate_args;
  auto* rate = app.add_subcommand("rate", "Entropy rate, UID and Hilberg diagnostics");
  rate->require_subcommand(1);
  sub = rate->add_subcommand("profile", "Conditional entropy profile");
  add_profile_args(sub, rate_args);
  sub->callback([&] { action = table_action([&] { return rate_profile(rate_args, err); }); });
  sub = rate->add_subcommand("cer", "Constant entropy rate diagnostic");
  add_profile_args(sub, rate_args);
  sub->add_option("--tolerance", rate_args.tolerance, "Flatness tolerance in bits");
  sub->add_option("--band", rate_args.band, "Use an i.i.d. noise band from this many resamples");
  sub->callback([&] { action = table_action([&] { return rate_cer(rate_args, globals, err); }); });
  sub = rate->add_subcommand("uid", "Uniform information density classification");
  sub->add_option("--model", rate_args.model, "Joint law over positions (JSON)")->required();
  sub->add_option("--sequence", rate_args.sequence, "Check a single sequence instead");
  sub->add_flag("--chars", rate_args.chars, "Split --sequence into characters");
  sub->add_option("--tolerance", rate_args.uid_tolerance, "Spread tolerance");
  sub->callback([&] { action = table_action([&] { return rate_uid(rate_args); }); });
  sub = rate->add_subcommand("hilberg", "Fit H_i = a i^-gamma + b");
  add_profile_args(sub, rate_args);
  sub->add_option("--variant", rate_args.variant)->check(CLI::IsMember({"pure", "relaxed"}));
  sub->add_option("--gamma-min", rate_args.hilberg.gamma_min);
  sub->add_option("--gamma-max", rate_args.hilberg.gamma_max);
  sub->add_option("--gamma-step", rate_args.hilberg.gamma_step);
  sub->add_flag("--log-space", rate_args.hilberg.log_space, "Fit the pure law in log space");
  sub->callback([&] { action = table_action([&] { return rate_hilberg(rate_args, err); }); });
  sub = rate->add_subcommand("peak", "Largest conditional entropy and its position");
  add_profile_args(sub, rate_args);
  sub->callback([&] { action = table_action([&] { return rate_peak(rate_args, err); }); });

  CodingArgs coding_args;
  sub = app.add_subcommand("coding", "Code lengths, mean lengths and the abbreviation check");
  sub->add_option("--input", coding_args.input, "CSV with type,probability[,length][,context...]")
      ->required();
  sub->add_flag("--allow-full-reduction", coding_args.allow_full_reduction, "Permit zero-length codes");
  sub->callback([&] { action = table_action([&] { return coding(coding_args); }); });

  SourceArgs source_args;
  sub = app.add_subcommand("gen", "Generate a token sequence");
  add_source_args(sub, source_args);
  sub->add_option("--length", source_args.length)->required();
  sub->add_flag("--chars", source_args.chars, "Write tokens without separators");
  sub->add_option("--out", source_args.out, "Output file (default: stdout)");
  sub->callback([&] {
    action = [&] {
      auto source = build_source(source_args);
      const auto seq = generate(source, source_args.length, derive_seed(globals.seed, "gen"));
      emit_text(render_tokens(seq, source_args.chars ? Tokenization::character : Tokenization::whitespace),
                source_args.out, out);
    };
  });

  sub = app.add_subcommand("scramble", "Uniformly permute the tokens of a corpus");
  sub->add_option("--input", source_args.input)->required();
  sub->add_flag("--chars", source_args.chars, "Character tokens");
  sub->add_option("--out", source_args.out, "Output file (default: stdout)");
  sub->callback([&] {
    action = [&] {
      const auto mode = source_args.chars ? Tokenization::character : Tokenization::whitespace;
      auto corpus = ingest_corpus(source_args.input, mode);
      for (const auto& w : corpus.warnings) {
        err << nlohmann::json{{"warning", {{"code", "io.EmptyInput"}, {"message", w}}}}.dump() << '\n';
      }
      const auto seq = scramble(std::move(corpus.tokens), derive_seed(globals.seed, "scramble"));
      emit_text(render_tokens(seq, mode), source_args.out, out);
    };
  });

  auto* model = app.add_subcommand("model", "Write model files");
  model->require_subcommand(1);
  std::string model_path;
  sub = model->add_subcommand("canon", "Read a model and write it in canonical form");
  sub->add_option("--model", model_path)->required();
  sub->add_option("--out", source_args.out);
  sub->callback([&] {
    action = [&] { emit_text(write_model(read_model_file(model_path)), source_args.out, out); };
  });
  sub = model->add_subcommand("block", "Exact law of the first k positions of a source");
  add_source_args(sub, source_args);
  sub->add_option("--k", source_args.k)->required()->check(CLI::PositiveNumber);
  sub->add_option("--reading", source_args.reading, "Periodic reading")
      ->check(CLI::IsMember({"relaxed", "full_history"}));
  sub->add_option("--out", source_args.out);
  sub->callback([&] {
    action = [&] {
      auto source = build_source(source_args);
      source.seed = derive_seed(globals.seed, "model.block");
      const auto reading =
          source_args.reading == "full_history" ? PeriodicReading::full_history : PeriodicReading::relaxed;
      emit_text(write_model(block_model(source, source_args.k, reading)), source_args.out, out);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (!action) throw UsageError("no subcommand selected");
    action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const Error& e) {
    err << nlohmann::json{{"error", {{"code", e.code()}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", {{"code", "internal.Unexpected"}, {"message", e.what()}}}}.dump()
        << '\n';
    return 1;
  }
  return 0;
}

}  // namespace wordorder::cli
