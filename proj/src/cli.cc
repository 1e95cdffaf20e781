/*
 * Copyright 2026 The threshcert Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "threshcert/cli.h"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "threshcert/bootstrap.h"
#include "threshcert/certificate.h"
#include "threshcert/data_model.h"
#include "threshcert/empirical.h"
#include "threshcert/ensemble.h"
#include "threshcert/error.h"
#include "threshcert/generalization.h"
#include "threshcert/io_util.h"
#include "threshcert/parallel.h"
#include "threshcert/pipeline.h"
#include "threshcert/random.h"
#include "threshcert/selection.h"
#include "threshcert/shift.h"
#include "threshcert/synth.h"

namespace threshcert::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 0;
constexpr std::uint64_t kSplitStream = 0x53504c4954ULL;

struct Options {
  std::string train;
  std::string val;
  std::string external;
  std::string target;
  std::string costs = "1,1";
  double delta = 0.10;
  std::optional<double> delta_boot;
  int B = 200;
  std::optional<std::uint64_t> seed;
  std::string grid = "midpoints";
  std::vector<std::string> aggs;
  std::string selector = "erm";
  std::string mode = "p-frozen";
  std::string out;
  int threads = 0;
  bool centered = false;
  // simulate
  std::string preset;
  int patients = 0;
  int cells = 0;
  // select
  std::string method = "model";
  // ensemble
  std::vector<std::string> sources;
  std::string weighting = "uniform";
  // diagnose
  std::optional<double> threshold;
};

std::uint64_t ResolveSeed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("THRESHCERT_SEED")) {
    const auto parsed = ParseInteger(env);
    if (!parsed || *parsed < 0) {
      throw InputError(fmt::format("THRESHCERT_SEED must be a nonnegative integer, got '{}'", env));
    }
    return static_cast<std::uint64_t>(*parsed);
  }
  return kDefaultSeed;
}

// Library argument checks surface as input errors.
template <typename F>
auto AsInput(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

Aggregator SingleAggregator(const Options& o) {
  if (o.aggs.size() > 1) {
    throw InputError("this command takes a single --agg");
  }
  return AsInput([&] { return Aggregator::Parse(o.aggs.empty() ? "max" : o.aggs.front()); });
}

BootstrapConfig MakeBootConfig(const Options& o) {
  BootstrapConfig cfg;
  cfg.B = o.B;
  cfg.delta_boot = o.delta_boot.value_or(o.delta);
  cfg.seed = ResolveSeed(o);
  cfg.centered_quantile = o.centered;
  if (cfg.B < 1) throw InputError("--B must be >= 1");
  if (!(cfg.delta_boot > 0.0 && cfg.delta_boot < 1.0)) {
    throw InputError("--delta-boot must be in (0,1)");
  }
  return cfg;
}

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("--delta must be in (0,1)");
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write '{}'", path));
  f << text;
  if (!f) throw InputError(fmt::format("failed writing '{}'", path));
}

template <typename Writer>
void WriteFile(const std::string& path, Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  WriteText(path, buf.str());
}

void Emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    WriteText(o.out, text);
  }
}

// Sibling path: report.json -> report_<suffix>.csv
std::string SidePath(const std::string& out, const std::string& suffix) {
  fs::path p(out);
  const fs::path stem = p.parent_path() / p.stem();
  return stem.string() + "_" + suffix + ".csv";
}

void CheckDisjoint(const Cohort& a, const Cohort& b, std::string_view what) {
  std::unordered_set<std::string> ids;
  for (const Patient& p : a.patients()) ids.insert(p.id);
  for (const Patient& p : b.patients()) {
    if (ids.count(p.id)) {
      throw InputError(fmt::format("patient '{}' appears in both {}", p.id, what));
    }
  }
}

int CmdSimulate(const Options& o, std::ostream& out) {
  if (o.preset.empty()) throw InputError("simulate needs --preset fig1-P|fig1-Q");
  const std::uint64_t seed = ResolveSeed(o);
  Preset preset = AsInput([&] { return ParsePreset(o.preset, seed); });
  if (o.patients > 0) preset.hierarchy.n_patients = o.patients;
  if (o.cells > 0) preset.hierarchy.cells_per_patient = o.cells;
  const Cohort cohort = GenerateCohort(preset.mixture, preset.hierarchy, preset.domain);
  std::ostringstream buf;
  WriteCohortCsv(cohort, buf);
  Emit(o, buf.str(), out);
  return kExitOk;
}

int CmdSelect(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.train.empty()) throw InputError("select needs --train");
  CheckDelta(o.delta);
  const CostSpec costs = AsInput([&] { return CostSpec::Parse(o.costs); });
  const GridMode grid = AsInput([&] { return GridMode::Parse(o.grid); });
  const SelectorKind selector = AsInput([&] { return SelectorKind::Parse(o.selector); });
  const BootstrapConfig boot = MakeBootConfig(o);
  const Cohort cohort = IngestCohort(o.train, Domain::kInternal);

  std::vector<CandidateInput> candidates;
  const std::vector<std::string> aggs = o.aggs.empty() ? std::vector<std::string>{"max"} : o.aggs;
  for (const std::string& text : aggs) {
    const Aggregator agg = AsInput([&] { return Aggregator::Parse(text); });
    candidates.push_back({Candidate{o.method, agg}, Aggregate(cohort, agg)});
  }
  const SelectionResult result = AsInput(
      [&] { return PenalizedSelect(candidates, costs, grid, boot, o.delta, selector); });
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';

  std::ostringstream table;
  WriteSelectionCsv(result, table);
  ordered_json summary{{"method", result.candidate.method_id},
                       {"aggregator", result.candidate.aggregator.ToString()},
                       {"selector", selector.ToString()},
                       {"t_hat", result.t_hat},
                       {"val_risk", result.min_val_risk},
                       {"g_boot", result.g_boot},
                       {"J", result.objective_j}};
  if (o.out.empty()) {
    out << table.str();
  } else {
    WriteText(o.out, table.str());
    out << DumpJson(summary);
  }
  return kExitOk;
}

int CmdCertify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.train.empty()) throw InputError("certify needs --train");
  CheckDelta(o.delta);
  PipelineOptions opt;
  opt.costs = AsInput([&] { return CostSpec::Parse(o.costs); });
  opt.grid = AsInput([&] { return GridMode::Parse(o.grid); });
  opt.selector = AsInput([&] { return SelectorKind::Parse(o.selector); });
  opt.boot = MakeBootConfig(o);
  opt.gamma.delta_val = o.delta;
  opt.delta_band = o.delta;
  opt.mode = AsInput([&] { return ParseMode(o.mode); });
  if (opt.mode == CertificateMode::kPQ && o.external.empty()) {
    throw InputError("--mode pq needs --external");
  }

  const Cohort loaded = IngestCohort(o.train, Domain::kInternal);
  std::string split = "explicit";
  std::optional<Cohort> train;
  std::optional<Cohort> val;
  if (o.val.empty()) {
    auto [a, b] = SplitCohort(loaded, DeriveSeed(opt.boot.seed, kSplitStream));
    train.emplace(std::move(a));
    val.emplace(std::move(b));
    split = fmt::format("internal 50/50 label-stratified, seed {}", opt.boot.seed);
  } else {
    train.emplace(loaded);
    val.emplace(IngestCohort(o.val, Domain::kInternal));
    CheckDisjoint(*train, *val, "--train and --val");
  }
  std::optional<Cohort> external;
  if (!o.external.empty()) external.emplace(IngestCohort(o.external, Domain::kExternal));

  // Several aggregators: the cross-candidate penalty picks one on training
  // patients only.
  Aggregator agg = Aggregator::Max();
  if (o.aggs.size() > 1) {
    if (opt.selector.kind != SelectorKind::Kind::kPenalized) {
      throw InputError("several --agg values need --selector penalized");
    }
    std::vector<CandidateInput> candidates;
    for (const std::string& text : o.aggs) {
      const Aggregator a = AsInput([&] { return Aggregator::Parse(text); });
      candidates.push_back({Candidate{"model", a}, Aggregate(*train, a)});
    }
    const SelectionResult sel = AsInput(
        [&] { return PenalizedSelect(candidates, opt.costs, opt.grid, opt.boot, o.delta); });
    for (const std::string& w : sel.warnings) err << "warning: " << w << '\n';
    agg = sel.candidate.aggregator;
  } else {
    agg = SingleAggregator(o);
  }

  const std::vector<PatientScore> train_scores = Aggregate(*train, agg);
  const std::vector<PatientScore> val_scores = Aggregate(*val, agg);
  std::optional<std::vector<PatientScore>> ext_scores;
  if (external) ext_scores = Aggregate(*external, agg);

  CertificateInputs extra;
  extra.design_effect = AsInput([&] { return EstimateDesignEffect(*val); });
  extra.provenance = Provenance{opt.boot.seed,     opt.boot.B,
                                opt.grid.ToString(), agg.ToString(),
                                o.costs,           opt.selector.ToString(),
                                split};
  std::optional<std::span<const PatientScore>> ext_span;
  if (ext_scores) ext_span = std::span<const PatientScore>(*ext_scores);
  const PipelineResult result =
      AsInput([&] { return CertifyScores(train_scores, val_scores, ext_span, opt, extra); });

  const std::string json = DumpJson(ToJson(result.certificate));
  if (o.out.empty()) {
    out << json;
    return kExitOk;
  }
  WriteText(o.out, json);
  WriteFile(SidePath(o.out, "risk"),
            [&](std::ostream& s) { WriteRiskCurveCsv(result.val_curve, s); });
  WriteFile(SidePath(o.out, "band"), [&](std::ostream& s) { WriteBandCsv(result.band, s); });
  WriteFile(SidePath(o.out, "replicates"),
            [&](std::ostream& s) { WriteReplicatesCsv(result.bootstrap, s); });
  if (result.train_curve.grid.size() >= 3) {
    const InstabilityMap map =
        ComputeInstabilityMap(train_scores, opt.costs, result.train_curve.grid, opt.boot);
    WriteFile(SidePath(o.out, "instability"),
              [&](std::ostream& s) { WriteInstabilityCsv(map, s); });
  }
  return kExitOk;
}

// "id,path,threshold[,variance]"
struct SourceSpec {
  std::string id;
  std::string path;
  double threshold = 0.0;
  std::optional<double> variance;
};

SourceSpec ParseSource(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.emplace_back(Trim(item));
  if (parts.size() < 3 || parts.size() > 4 || parts[0].empty() || parts[1].empty()) {
    throw InputError(fmt::format("--source must be id,path,threshold[,variance], got '{}'", text));
  }
  SourceSpec s{parts[0], parts[1], 0.0, std::nullopt};
  const auto t = ParseReal(parts[2]);
  if (!t || !std::isfinite(*t)) throw InputError(fmt::format("bad threshold in --source '{}'", text));
  s.threshold = *t;
  if (parts.size() == 4) {
    const auto v = ParseReal(parts[3]);
    if (!v || !(*v >= 0.0)) throw InputError(fmt::format("bad variance in --source '{}'", text));
    s.variance = *v;
  }
  return s;
}

int CmdEnsemble(const Options& o, std::ostream& out) {
  if (o.target.empty()) throw InputError("ensemble needs --target");
  if (o.sources.empty()) throw InputError("ensemble needs at least one --source");
  const Aggregator agg = SingleAggregator(o);
  const Weighting weighting = AsInput([&] { return ParseWeighting(o.weighting); });
  const Cohort target = IngestCohort(o.target, Domain::kExternal);
  const std::vector<double> target_scores = ScoreValues(Aggregate(target, agg));

  std::vector<QuantileMappedThreshold> items;
  for (const std::string& text : o.sources) {
    const SourceSpec src = ParseSource(text);
    if (weighting == Weighting::kPrecision && !src.variance) {
      throw InputError(fmt::format("precision weighting needs a variance for source '{}'", src.id));
    }
    const Cohort ref = IngestCohort(src.path, Domain::kInternal);
    const std::vector<double> ref_scores = ScoreValues(Aggregate(ref, agg));
    const double weight =
        src.variance ? (*src.variance > 0.0 ? 1.0 / *src.variance
                                            : std::numeric_limits<double>::infinity())
                     : 1.0;
    items.push_back(MapThreshold(src.id, src.threshold, ref_scores, weight));
  }
  const EnsembleResult res =
      AsInput([&] { return EnsembleThresholds(items, target_scores, weighting); });

  ordered_json list = ordered_json::array();
  for (const auto& item : items) {
    list.push_back({{"source_id", item.source_id},
                    {"threshold", item.threshold},
                    {"quantile_u", item.quantile_u},
                    {"weight", std::isinf(item.weight) ? ordered_json("inf") : ordered_json(item.weight)}});
  }
  ordered_json doc{{"ensemble",
                    {{"aggregator", agg.ToString()},
                     {"weighting", WeightingName(weighting)},
                     {"cross_source_correlation", "assumed zero"},
                     {"items", std::move(list)},
                     {"u_bar", res.u_bar},
                     {"threshold", res.threshold}}}};
  Emit(o, DumpJson(doc), out);
  return kExitOk;
}

int CmdDiagnose(const Options& o, std::ostream& out) {
  if (o.train.empty() || o.external.empty()) {
    throw InputError("diagnose needs --train and --external");
  }
  const CostSpec costs = AsInput([&] { return CostSpec::Parse(o.costs); });
  const GridMode grid_mode = AsInput([&] { return GridMode::Parse(o.grid); });
  const Aggregator agg = SingleAggregator(o);
  const Cohort p = IngestCohort(o.train, Domain::kInternal);
  const Cohort q = IngestCohort(o.external, Domain::kExternal);
  const std::vector<PatientScore> ps = Aggregate(p, agg);
  const std::vector<PatientScore> qs = Aggregate(q, agg);

  const DomainStats pstats = AsInput([&] { return MakeDomainStats(ps); });
  const DomainStats qstats = AsInput([&] { return MakeDomainStats(qs); });
  double t = 0.0;
  std::string source = "flag";
  if (o.threshold) {
    t = *o.threshold;
  } else {
    const ThresholdGrid grid = AsInput([&] { return MakeGrid(ps, grid_mode); });
    t = SelectThreshold(EmpiricalRiskCurve(pstats, costs, grid),
                        AsInput([&] { return SelectorKind::Parse(o.selector); }));
    source = fmt::format("{} on --train, grid {}", o.selector, grid_mode.ToString());
  }
  const ShiftReport report = ShiftAt(t, pstats, qstats, costs);
  ordered_json doc{{"threshold", t},
                   {"threshold_source", source},
                   {"aggregator", agg.ToString()},
                   {"shift_report", ToJson(report)},
                   {"design_effect",
                    {{"internal", ToJson(AsInput([&] { return EstimateDesignEffect(p); }))},
                     {"external", ToJson(AsInput([&] { return EstimateDesignEffect(q); }))}}}};
  Emit(o, DumpJson(doc), out);
  return kExitOk;
}

void AddCommon(CLI::App* cmd, Options& o) {
  cmd->add_option("--costs", o.costs, "misclassification costs c10,c01")->capture_default_str();
  cmd->add_option("--delta", o.delta, "confidence parameter for validation and band")
      ->capture_default_str();
  cmd->add_option("--delta-boot", o.delta_boot, "bootstrap quantile level (default: --delta)");
  cmd->add_option("--B", o.B, "bootstrap replicates")->capture_default_str();
  cmd->add_option("--seed", o.seed, "random seed (fallback: THRESHCERT_SEED, then 0)");
  cmd->add_option("--grid", o.grid, "midpoints|uniform:N")->capture_default_str();
  cmd->add_option("--agg", o.aggs, "mean|max|quantile:q|topk:k (repeatable)");
  cmd->add_option("--selector", o.selector, "erm|youden|sens:x|spec:x|penalized")
      ->capture_default_str();
  cmd->add_flag("--centered", o.centered, "use centered bootstrap deviations");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Patient-level threshold selection and external-risk certificates", "threshcert"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "worker threads (default: all cores)");

  CLI::App* simulate = app.add_subcommand("simulate", "write a synthetic cohort CSV");
  simulate->add_option("--preset", o.preset, "fig1-P|fig1-Q")->required();
  simulate->add_option("--seed", o.seed, "random seed");
  simulate->add_option("--patients", o.patients, "override the patient count");
  simulate->add_option("--cells", o.cells, "override the instances per patient");
  simulate->add_option("--out", o.out, "output CSV (default: stdout)");

  CLI::App* select = app.add_subcommand("select", "penalized selection across aggregators");
  select->add_option("--train", o.train, "cohort CSV")->required();
  select->add_option("--method", o.method, "method id for the table")->capture_default_str();
  select->add_option("--out", o.out, "table CSV (default: stdout)");
  AddCommon(select, o);

  CLI::App* certify = app.add_subcommand("certify", "build an external-risk certificate");
  certify->add_option("--train", o.train, "training cohort CSV")->required();
  certify->add_option("--val", o.val, "validation cohort CSV (default: internal split)");
  certify->add_option("--external", o.external, "external cohort CSV");
  certify->add_option("--mode", o.mode, "p-frozen|pq")->capture_default_str();
  certify->add_option("--out", o.out, "certificate JSON (default: stdout)");
  AddCommon(certify, o);

  CLI::App* ensemble = app.add_subcommand("ensemble", "average thresholds on the quantile scale");
  ensemble->add_option("--target", o.target, "target cohort CSV")->required();
  ensemble->add_option("--source", o.sources, "id,path,threshold[,variance] (repeatable)")
      ->required();
  ensemble->add_option("--agg", o.aggs, "aggregator");
  ensemble->add_option("--weighting", o.weighting, "uniform|precision")->capture_default_str();
  ensemble->add_option("--out", o.out, "JSON output (default: stdout)");

  CLI::App* diagnose = app.add_subcommand("diagnose", "shift report and design effects");
  diagnose->add_option("--train", o.train, "internal cohort CSV")->required();
  diagnose->add_option("--external", o.external, "external cohort CSV")->required();
  diagnose->add_option("--threshold", o.threshold, "threshold (default: selector on --train)");
  diagnose->add_option("--costs", o.costs, "c10,c01")->capture_default_str();
  diagnose->add_option("--grid", o.grid, "midpoints|uniform:N")->capture_default_str();
  diagnose->add_option("--agg", o.aggs, "aggregator");
  diagnose->add_option("--selector", o.selector, "rule for the default threshold")
      ->capture_default_str();
  diagnose->add_option("--out", o.out, "JSON output (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  const int previous_threads = o.threads;
  if (o.threads < 0) {
    err << "error: --threads must be >= 0\n";
    return kExitInputError;
  }
  SetThreadCount(previous_threads);
  try {
    if (simulate->parsed()) return CmdSimulate(o, out);
    if (select->parsed()) return CmdSelect(o, out, err);
    if (certify->parsed()) return CmdCertify(o, out, err);
    if (ensemble->parsed()) return CmdEnsemble(o, out);
    if (diagnose->parsed()) return CmdDiagnose(o, out);
  } catch (const InfeasibleConstraint& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace threshcert::cli
