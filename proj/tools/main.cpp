#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "groupfx/effects.hpp"
#include "groupfx/limits.hpp"
#include "groupfx/pipeline.hpp"
#include "groupfx/report.hpp"

using namespace groupfx;

namespace {

// Exit codes: 0 report rendered, 2 input/IO, 3 rank deficiency, 4 bad
// parameters or domain errors. Diagnostics go to stderr, data to stdout.
struct CliError {
  int code;
  std::string message;
};

Dataset load_input(const std::string& input, const std::string& response) {
  if (input == "hald") return hald_dataset();
  return load_csv_file(input, response);
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw CliError{4, std::string("invalid ") + what + " value '" + item + "'"};
    }
  }
  if (out.empty()) throw CliError{4, std::string("empty ") + what + " list"};
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

void warn_failed_arrangements(const ArrangedDataset& ad) {
  for (size_t k = 0; k < ad.groups.size(); ++k) {
    const GroupArrangement& g = ad.groups[k];
    if (g.achieved_apc) continue;
    std::fprintf(stderr,
                 "warning: group g%zu has %zu non-positive pairwise correlation(s) after sign "
                 "flips (r_min = %.5f)\n",
                 k + 1, g.negative_pairs.size(), g.r_min);
  }
}

std::string group_members_label(const ArrangedDataset& ad, const GroupArrangement& g) {
  std::string s = "{";
  for (size_t i = 0; i < g.member_indices.size(); ++i) {
    if (i) s += ",";
    s += ad.data.predictor_names[g.member_indices[i]];
  }
  return s + "}";
}

void emit(const ReportDocument& doc, bool json) {
  std::fputs((json ? doc.render_json() : doc.render_text()).c_str(), stdout);
}

Section correlation_section(std::string title, const CorrelationStructure& c) {
  LabeledMatrix m;
  m.row_labels = c.names;
  m.col_labels = c.names;
  m.values = c.r.to_matrix();
  m.style = NumStyle::corr5;
  return Section{std::move(title), std::move(m)};
}

Section legend_section(const std::vector<std::string>& legend) {
  Table t;
  t.columns = {"renamed", "definition"};
  t.styles = {NumStyle::integer, NumStyle::integer};
  for (const auto& entry : legend) {
    size_t eq = entry.find(" = ");
    t.rows.push_back({Cell(entry.substr(0, eq)), Cell(entry.substr(eq + 3))});
  }
  return Section{"Renaming", std::move(t)};
}

// ---------------------------------------------------------------------------
// corr / groups

struct CorrArgs {
  std::string input = "hald";
  std::string response = "y";
  bool rename_apc = false;
  double threshold = 0.8;
  bool list_groups = false;
};

void cmd_corr(const CorrArgs& args, bool json) {
  Dataset d = load_input(args.input, args.response);
  auto [sd, st] = standardize(d);
  CorrelationStructure corr = correlation_matrix(sd);
  ReportDocument doc;
  doc.sections.push_back(correlation_section("Correlations", corr));

  if (args.rename_apc) {
    ArrangedDataset ad = arrange_dataset(d, args.threshold, /*rename=*/true);
    warn_failed_arrangements(ad);
    auto [sd2, st2] = standardize(ad.data);
    doc.sections.push_back(legend_section(ad.legend));
    doc.sections.push_back(correlation_section("Correlations (renamed)", correlation_matrix(sd2)));
  }

  if (args.list_groups) {
    std::vector<std::vector<int>> groups = detect_groups(corr, args.threshold);
    Table t;
    t.columns = {"group", "members", "r_min", "apc"};
    t.styles = {NumStyle::integer, NumStyle::integer, NumStyle::corr5, NumStyle::integer};
    for (size_t k = 0; k < groups.size(); ++k) {
      GroupArrangement g = apc_arrange(corr, groups[k]);
      std::string members = "{";
      for (size_t i = 0; i < g.member_indices.size(); ++i) {
        if (i) members += ",";
        if (g.signs[i] < 0) members += "-";
        members += d.predictor_names[g.member_indices[i]];
      }
      members += "}";
      t.rows.push_back({Cell("g" + std::to_string(k + 1)), Cell(members), Cell(g.r_min),
                        Cell(std::string(g.achieved_apc ? "yes" : "no"))});
    }
    doc.sections.push_back({"Detected groups", std::move(t)});
  }
  emit(doc, json);
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  std::string input = "hald";
  std::string response = "y";
  bool rename_apc = false;
  double threshold = 0.8;
  std::vector<std::string> groups;  // each "a,b,c"
  std::string weights;              // "0.45,0.55", needs exactly one group
  std::string df = "paper";
};

void cmd_fit(const FitArgs& args, bool json) {
  Dataset d = load_input(args.input, args.response);

  ArrangedDataset ad;
  if (args.rename_apc) ad = arrange_dataset(d, args.threshold, /*rename=*/true);
  if (!args.groups.empty()) {
    std::vector<std::vector<std::string>> group_names;
    for (const auto& spec : args.groups) group_names.push_back(parse_name_list(spec));
    // group names refer to the design as it stands after the optional rename
    const Dataset& base = args.rename_apc ? ad.data : d;
    std::vector<std::string> legend = ad.legend;
    ad = arrange_dataset_groups(base, group_names);
    legend.insert(legend.end(), ad.legend.begin(), ad.legend.end());
    ad.legend = std::move(legend);
  } else if (!args.rename_apc) {
    ad = arrange_dataset(d, args.threshold, /*rename=*/false);
  }

  DfConvention dfc;
  if (args.df == "paper")
    dfc = DfConvention::paper;
  else if (args.df == "conventional")
    dfc = DfConvention::conventional;
  else
    throw CliError{4, "unknown df convention '" + args.df + "' (use paper or conventional)"};

  warn_failed_arrangements(ad);
  auto [sd, st] = standardize(ad.data);
  FitResult fit;
  try {
    fit = fit_standardized(sd, dfc);
  } catch (const RankDeficientError& e) {
    throw CliError{3, std::string("rank deficient design: column '") +
                          ad.data.predictor_names[e.column_index] + "'"};
  }
  RawCoefficients raw = destandardize(fit, st);

  std::optional<Vector> weights;
  if (!args.weights.empty()) {
    if (ad.groups.size() != 1)
      throw CliError{4, "--weights needs exactly one group (got " + std::to_string(ad.groups.size()) + ")"};
    weights = parse_double_list(args.weights, "weight");
  }

  ReportDocument doc;
  if (!ad.legend.empty()) doc.sections.push_back(legend_section(ad.legend));

  Table t;
  t.columns = {"", "Estimate", "Std. Error", "t value", "Pr(>|t|)"};
  t.styles = {NumStyle::integer, NumStyle::est3, NumStyle::est3, NumStyle::est3, NumStyle::prob4};
  for (size_t j = 0; j < fit.coefficients.size(); ++j)
    t.rows.push_back({Cell(ad.data.predictor_names[j]), Cell(fit.coefficients[j]), Cell(fit.std_errors[j]),
                      Cell(fit.t_values[j]), Cell(fit.p_values[j])});

  for (size_t k = 0; k < ad.groups.size(); ++k) {
    const GroupArrangement& g = ad.groups[k];
    EffectEstimate e =
        weighted_effect(fit, GroupEffectSpec{g, Vector(g.member_indices.size(), 1.0 / g.member_indices.size())});
    t.rows.push_back({Cell("g" + std::to_string(k + 1) + " " + group_members_label(ad, g)), Cell(e.estimate),
                      Cell(e.std_error), Cell(e.t_value), Cell(e.p_value)});
  }
  if (weights) {
    EffectEstimate e = weighted_effect(fit, GroupEffectSpec{ad.groups[0], *weights});
    t.rows.push_back({Cell("w1 " + group_members_label(ad, ad.groups[0])), Cell(e.estimate), Cell(e.std_error),
                      Cell(e.t_value), Cell(e.p_value)});
  }
  doc.sections.push_back({"Coefficients and group effects", std::move(t)});

  Table model;
  model.columns = {"sigma_hat", "df", "rss"};
  model.styles = {NumStyle::est3, NumStyle::integer, NumStyle::est3};
  model.rows.push_back({Cell(std::sqrt(fit.sigma2_hat)), Cell(static_cast<long long>(fit.df)), Cell(fit.rss)});
  doc.sections.push_back({"Model", std::move(model)});

  if (!ad.groups.empty()) {
    Table floors;
    floors.columns = {"group", "variance floor", "se floor"};
    floors.styles = {NumStyle::integer, NumStyle::est3, NumStyle::est3};
    for (size_t k = 0; k < ad.groups.size(); ++k) {
      double q = static_cast<double>(ad.groups[k].member_indices.size());
      double floor = fit.sigma2_hat / (q * q);
      floors.rows.push_back({Cell("g" + std::to_string(k + 1)), Cell(floor), Cell(std::sqrt(floor))});
    }
    doc.sections.push_back({"Group variance floors", std::move(floors)});

    Table vwa;
    vwa.columns = {"group", "estimate", "std error", "se floor"};
    vwa.styles = {NumStyle::integer, NumStyle::est3, NumStyle::est3, NumStyle::est3};
    for (size_t k = 0; k < ad.groups.size(); ++k) {
      EffectEstimate e = variability_weighted_effect(raw, fit, st, ad.groups[k]);
      vwa.rows.push_back({Cell("g" + std::to_string(k + 1)), Cell(e.estimate), Cell(e.std_error),
                          Cell(e.variance_floor ? std::sqrt(*e.variance_floor) : 0.0)});
    }
    doc.sections.push_back({"Variability weighted effects", std::move(vwa)});
  }

  if (json) {
    Table rawt;
    rawt.columns = {"", "value"};
    rawt.styles = {NumStyle::integer, NumStyle::est3};
    rawt.rows.push_back({Cell("(intercept)"), Cell(raw.intercept)});
    for (size_t j = 0; j < raw.slopes.size(); ++j)
      rawt.rows.push_back({Cell(ad.data.predictor_names[j]), Cell(raw.slopes[j])});
    doc.sections.push_back({"Raw coefficients", std::move(rawt)});

    CorrelationStructure corr = correlation_matrix(sd);
    for (size_t k = 0; k < ad.groups.size(); ++k) {
      PartitionedCorrelation part = partition(corr, ad.groups[k]);
      LabeledMatrix m;
      for (int i : ad.groups[k].member_indices) m.row_labels.push_back(ad.data.predictor_names[i]);
      m.col_labels = m.row_labels;
      m.values = part.cross_term.to_matrix();
      m.style = NumStyle::corr5;
      doc.sections.push_back({"Cross term g" + std::to_string(k + 1), std::move(m)});
    }
  }
  emit(doc, json);
}

// ---------------------------------------------------------------------------
// limits

void cmd_limits(int q, const std::string& rho_list, bool json) {
  Vector grid = parse_double_list(rho_list, "rho");
  std::vector<LimitTracePoint> trace = limit_trace(q, grid);

  ReportDocument doc;
  Table t;
  t.columns = {"rho", "lambda1", "eigvec_gap", "quad_form", "perturbation", "var_ratio", "floor"};
  t.styles = {NumStyle::corr5, NumStyle::corr5, NumStyle::corr5, NumStyle::corr5,
              NumStyle::corr5, NumStyle::corr5, NumStyle::corr5};
  double floor = 1.0 / (static_cast<double>(q) * q);
  for (const LimitTracePoint& pt : trace)
    t.rows.push_back({Cell(pt.rho), Cell(pt.lambda1), Cell(pt.eigvec_gap), Cell(pt.quad_form),
                      Cell(pt.perturbation_norm), Cell(pt.var_ratio), Cell(floor)});
  doc.sections.push_back({"Equicorrelation limit trace (q = " + std::to_string(q) + ")", std::move(t)});
  emit(doc, json);
}

// ---------------------------------------------------------------------------
// simulate

struct SimArgs {
  int q = 4;
  int n = 50;
  double rho = 0.99;
  double sigma = 1.0;
  long reps = 10000;
  uint64_t seed = 1;
  std::string beta;  // optional comma list, defaults to all ones
};

void cmd_simulate(const SimArgs& args, bool json) {
  Vector beta(std::max(args.q, 0), 1.0);
  if (!args.beta.empty()) {
    beta = parse_double_list(args.beta, "beta");
    if (static_cast<int>(beta.size()) != args.q) throw CliError{4, "--beta needs exactly q values"};
  }
  SimulationReport rep = simulate_group_effect(args.q, args.n, args.rho, beta, args.sigma, args.reps, args.seed);

  ReportDocument doc;
  Table cfg;
  cfg.columns = {"q", "n", "rho", "sigma", "reps", "seed"};
  cfg.styles = {NumStyle::integer, NumStyle::integer, NumStyle::corr5,
                NumStyle::corr5, NumStyle::integer, NumStyle::integer};
  cfg.rows.push_back({Cell(static_cast<long long>(rep.q)), Cell(static_cast<long long>(rep.n)), Cell(rep.rho),
                      Cell(rep.sigma), Cell(static_cast<long long>(rep.n_reps)),
                      Cell(static_cast<long long>(rep.seed))});
  doc.sections.push_back({"Simulation", std::move(cfg)});

  Table var;
  var.columns = {"empirical_var", "theoretical_var", "ratio"};
  var.styles = {NumStyle::corr5, NumStyle::corr5, NumStyle::corr5};
  var.rows.push_back({Cell(rep.empirical_var), Cell(rep.theoretical_var), Cell(rep.ratio)});
  doc.sections.push_back({"Group effect variance", std::move(var)});

  Table per;
  per.columns = {"coefficient", "empirical_var"};
  per.styles = {NumStyle::integer, NumStyle::corr5};
  for (int j = 0; j < rep.q; ++j)
    per.rows.push_back({Cell("b" + std::to_string(j + 1)), Cell(rep.per_coefficient_var[j])});
  doc.sections.push_back({"Per-coefficient empirical variance", std::move(per)});
  emit(doc, json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"least squares group effects of strongly correlated predictors"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format (text or json)")
      ->envname("GROUPFX_FORMAT")
      ->check(CLI::IsMember({"text", "json"}));
  bool json_flag = false;
  app.add_flag("--json", json_flag, "shortcut for --format json");

  CorrArgs corr_args;
  CLI::App* corr = app.add_subcommand("corr", "predictor correlation matrix");
  corr->add_option("input", corr_args.input, "csv path or 'hald'")->required();
  corr->add_option("-r,--response", corr_args.response, "response column name");
  corr->add_flag("--rename-apc", corr_args.rename_apc, "also print the sign-arranged, renamed matrix");
  corr->add_option("--threshold", corr_args.threshold, "group detection threshold");

  CorrArgs groups_args;
  groups_args.list_groups = true;
  CLI::App* groups_cmd = app.add_subcommand("groups", "detected strongly correlated groups");
  groups_cmd->add_option("input", groups_args.input, "csv path or 'hald'")->required();
  groups_cmd->add_option("-r,--response", groups_args.response, "response column name");
  groups_cmd->add_flag("--rename-apc", groups_args.rename_apc, "also print the sign-arranged, renamed matrix");
  groups_cmd->add_option("--threshold", groups_args.threshold, "group detection threshold");

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "standardized fit with group effects");
  fit->add_option("input", fit_args.input, "csv path or 'hald'")->required();
  fit->add_option("-r,--response", fit_args.response, "response column name");
  fit->add_flag("--rename-apc", fit_args.rename_apc, "reorder and rename groups before fitting");
  fit->add_option("--threshold", fit_args.threshold, "group detection threshold");
  fit->add_option("--groups", fit_args.groups,
                  "explicit group as comma-separated names (repeatable); members are "
                  "taken in ascending column order");
  fit->add_option("--weights", fit_args.weights, "weights for the single supplied group, e.g. 0.45,0.55");
  fit->add_option("--df", fit_args.df, "degrees-of-freedom convention: paper (n-k) or conventional (n-k-1)");

  int limits_q = 4;
  std::string limits_rho;
  CLI::App* limits = app.add_subcommand("limits", "equicorrelation trace toward the correlated limit");
  limits->add_option("--q", limits_q, "group size")->required();
  limits->add_option("--rho", limits_rho, "ascending comma-separated correlation values")->required();

  SimArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo check of the group effect variance");
  simulate->add_option("--q", sim_args.q, "number of predictors")->required();
  simulate->add_option("--n", sim_args.n, "observations per replication")->required();
  simulate->add_option("--rho", sim_args.rho, "target equicorrelation")->required();
  simulate->add_option("--sigma", sim_args.sigma, "error standard deviation");
  simulate->add_option("--reps", sim_args.reps, "number of replications");
  simulate->add_option("--seed", sim_args.seed, "random seed");
  simulate->add_option("--beta", sim_args.beta, "true standardized coefficients (comma list, default all 1)");

  std::string export_path;
  CLI::App* export_hald = app.add_subcommand("export-hald", "write the embedded Hald dataset as CSV");
  export_hald->add_option("-o,--output", export_path, "output path (default: stdout)");

  // --json / --format may appear after the subcommand name
  for (CLI::App* sub : {corr, groups_cmd, fit, limits, simulate, export_hald}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  bool json = json_flag || format == "json";

  try {
    if (corr->parsed()) cmd_corr(corr_args, json);
    if (groups_cmd->parsed()) cmd_corr(groups_args, json);
    if (fit->parsed()) cmd_fit(fit_args, json);
    if (limits->parsed()) cmd_limits(limits_q, limits_rho, json);
    if (simulate->parsed()) cmd_simulate(sim_args, json);
    if (export_hald->parsed()) {
      std::string csv = to_csv(hald_dataset());
      if (export_path.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        std::ofstream out(export_path);
        if (!out) throw IoError("cannot open file: " + export_path);
        out << csv;
      }
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const RankDeficientError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NotPositiveDefiniteError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
