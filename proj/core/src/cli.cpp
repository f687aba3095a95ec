#include "latentscope/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "latentscope/csv_io.hpp"
#include "latentscope/errors.hpp"
#include "latentscope/features.hpp"
#include "latentscope/heatmap.hpp"
#include "latentscope/model_io.hpp"
#include "latentscope/readout.hpp"
#include "latentscope/rng.hpp"
#include "latentscope/svg.hpp"
#include "latentscope/synth.hpp"

namespace latentscope {

namespace {

constexpr std::uint64_t kBaselineTag = 0x62617365;  // "base"
constexpr std::uint64_t kModelTag = 0x6d6f64656c;   // "model"
constexpr std::uint64_t kReadoutTag = 0x726f7574;   // "rout"

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void note(const std::string& path) { std::cout << "wrote " << path << "\n"; }

struct SynthCfg {
  std::string out;
  int n = 200;
  int steps = 8;
  int features = 12;
  int states = 4;
  std::uint64_t seed = 0;
  std::string scenario = "plain";
};

void cmd_synth(const SynthCfg& c) {
  Dataset data = make_dataset(c.n, c.steps, c.features, c.seed);
  save_dataset_csv(data, join(c.out, "data.csv"));
  note(join(c.out, "data.csv"));
  if (c.scenario == "plain") return;
  if (c.scenario != "block")
    throw InputError("synth: unknown scenario '" + c.scenario + "', expected plain or block");
  if (c.states < 1 || c.features % c.states != 0)
    throw InputError("synth: features=" + std::to_string(c.features) +
                     " must split evenly over states=" + std::to_string(c.states));

  Dataset aug = augment(data);
  FeatureStats stats = fit_minmax(aug);
  apply_minmax_shift(aug, stats);
  save_dataset_csv(aug, join(c.out, "augmented.csv"));
  note(join(c.out, "augmented.csv"));
  save_stats_csv(stats, join(c.out, "stats.csv"));
  note(join(c.out, "stats.csv"));

  const int per_state = c.features / c.states;
  std::vector<std::vector<int>> raw_subsets(c.states);
  for (int s = 0; s < c.states; ++s)
    for (int j = 0; j < per_state; ++j) raw_subsets[s].push_back(s * per_state + j);
  BlockModelSpec block =
      make_block_model(4 * c.features, c.states, expand_subsets(raw_subsets, c.features),
                       SplitMix64::derive(c.seed, kModelTag), 1.5);
  save_mlp(block.mlp, join(c.out, "model.json"));
  note(join(c.out, "model.json"));

  std::string subsets = "state,raw_feature\n";
  for (int s = 0; s < c.states; ++s)
    for (int j : raw_subsets[s])
      subsets += std::to_string(s) + ',' + std::to_string(j) + '\n';
  write_text_file(join(c.out, "subsets.csv"), subsets);
  note(join(c.out, "subsets.csv"));

  ReadoutSpec readout;
  SplitMix64 rng(SplitMix64::derive(c.seed, kReadoutTag));
  readout.weights.resize(static_cast<size_t>(c.states) * c.steps);
  for (double& w : readout.weights) w = rng.uniform(-1.0, 1.0);
  readout.bias = 0.0;
  save_readout(readout, join(c.out, "readout.json"));
  note(join(c.out, "readout.json"));
}

struct AugmentCfg {
  std::string data;
  std::string out;
  std::string stats_path;
  bool normalize = false;
};

void cmd_augment(const AugmentCfg& c) {
  if (c.normalize && !c.stats_path.empty())
    throw InputError("augment: choose one of --normalize (fit here) or --stats (reuse)");
  Dataset data = load_dataset_csv(c.data);
  const MissingReport report = fill_missing(data);
  Dataset aug = augment(data);
  if (c.normalize) {
    FeatureStats stats = fit_minmax(aug);
    apply_minmax_shift(aug, stats);
    save_stats_csv(stats, join(c.out, "stats.csv"));
    note(join(c.out, "stats.csv"));
  } else if (!c.stats_path.empty()) {
    apply_minmax_shift(aug, load_stats_csv(c.stats_path));
  }
  save_dataset_csv(aug, join(c.out, "augmented.csv"));
  note(join(c.out, "augmented.csv"));
  std::cout << "filled " << report.filled << " missing cells\n";
}

struct AttributeCfg {
  std::string model;
  std::string data;
  std::string test_id;
  std::string baseline_id;
  std::string out;
  int n_quad = 64;
  double epsilon = 1e-12;
};

void cmd_attribute(const AttributeCfg& c) {
  Dataset data = load_dataset_csv(c.data);
  data.validate(true);
  std::unique_ptr<LatentModel> model = load_latent_model(c.model, data);
  PairAttribution pa =
      model->attribute(data.by_id(c.test_id), data.by_id(c.baseline_id), c.n_quad);
  ImpactMatrix im = impact_measure(pa, c.epsilon);
  save_attribution_csv(pa, im, data.feature_names, model->step_count(), c.epsilon,
                       join(c.out, "attribution.csv"));
  note(join(c.out, "attribution.csv"));
  save_projection_csv(projected_jacobian(pa), data.feature_names,
                      join(c.out, "projection.csv"));
  note(join(c.out, "projection.csv"));
}

struct HeatmapCfg {
  std::string model;
  std::string data;
  std::string out;
  std::string baselines_path;
  std::string direction = "both";
  int n_baselines = 16;
  SelectionParams params;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string readout;  // explain only
  int top_n = 3;        // explain only
};

struct BaselineSplit {
  Dataset pool;
  std::vector<TimeSeriesSample> baselines;
};

// Baselines either come from their own file (full data stays the pool) or are
// a seeded balanced pick held out of the pool.
BaselineSplit resolve_baselines(const Dataset& data, const HeatmapCfg& c) {
  BaselineSplit out;
  if (!c.baselines_path.empty()) {
    Dataset bl = load_dataset_csv(c.baselines_path);
    bl.validate(true);
    if (bl.times != data.times)
      throw InputError("'" + c.baselines_path + "': baseline time grid differs from --data");
    if (bl.feature_names != data.feature_names)
      throw InputError("'" + c.baselines_path + "': baseline features differ from --data");
    out.pool = data;
    out.baselines = bl.samples;
    return out;
  }
  if (c.n_baselines < 1) throw InputError("--n-baselines must be positive");
  std::vector<int> ids = balanced_subset(data.labels(), c.n_baselines,
                                         SplitMix64::derive(c.seed, kBaselineTag));
  out.pool.times = data.times;
  out.pool.feature_names = data.feature_names;
  size_t next = 0;
  for (int i = 0; i < data.sample_count(); ++i) {
    if (next < ids.size() && ids[next] == i) {
      out.baselines.push_back(data.samples[i]);
      ++next;
    } else {
      out.pool.samples.push_back(data.samples[i]);
    }
  }
  return out;
}

void write_map(const HeatMap& m, const std::string& dir, const std::string& stem) {
  save_heatmap_csv(m, join(dir, stem + ".csv"));
  note(join(dir, stem + ".csv"));
  write_text_file(join(dir, stem + ".svg"), render_heatmap_svg(m));
  note(join(dir, stem + ".svg"));
}

void cmd_heatmap(const HeatmapCfg& c) {
  if (c.direction != "both" && c.direction != "positive" && c.direction != "negative")
    throw InputError("--direction must be both, positive or negative");
  Dataset data = load_dataset_csv(c.data);
  data.validate(true);
  std::unique_ptr<LatentModel> model = load_latent_model(c.model, data);
  BaselineSplit split = resolve_baselines(data, c);
  HeatMapPair pair = generate_heatmap_pair(split.pool, *model, split.baselines, c.params,
                                           c.seed, c.workers);
  if (c.direction != "negative") write_map(pair.pos, c.out, "heatmap_pos");
  if (c.direction != "positive") write_map(pair.neg, c.out, "heatmap_neg");
}

struct RankCfg {
  std::string model;
  std::string data;
  std::string readout;
  std::string out;
};

void cmd_rank(const RankCfg& c) {
  Dataset data = load_dataset_csv(c.data);
  data.validate(true);
  std::unique_ptr<LatentModel> model = load_latent_model(c.model, data);
  ReadoutSpec readout = load_readout(c.readout);
  Matrix Z(data.sample_count(), model->latent_row_count());
  for (int i = 0; i < data.sample_count(); ++i) {
    std::vector<double> z = model->latents(data.samples[i]);
    std::copy(z.begin(), z.end(), Z.row(i));
  }
  save_ranking_csv(rank_latents(readout, Z, model->step_count()), model->step_count(),
                   join(c.out, "ranking.csv"));
  note(join(c.out, "ranking.csv"));
}

void cmd_explain(const HeatmapCfg& c) {
  Dataset data = load_dataset_csv(c.data);
  data.validate(true);
  std::unique_ptr<LatentModel> model = load_latent_model(c.model, data);
  ReadoutSpec readout = load_readout(c.readout);
  BaselineSplit split = resolve_baselines(data, c);
  ExplanationReport report = explanation_chain(*model, readout, split.pool,
                                               split.baselines, c.params, c.top_n, c.seed,
                                               c.workers);
  const int T = model->step_count();
  save_ranking_csv(report.ranking, T, join(c.out, "ranking.csv"));
  note(join(c.out, "ranking.csv"));
  write_map(report.maps.pos, c.out, "heatmap_pos");
  write_map(report.maps.neg, c.out, "heatmap_neg");
  for (size_t i = 0; i < report.entries.size(); ++i) {
    const std::string stem = "chain" + std::to_string(i);
    save_slice_csv(report.maps, report.entries[i].latent.row,
                   join(c.out, stem + "_slice.csv"));
    note(join(c.out, stem + "_slice.csv"));
    save_scatter_csv(report.entries[i], split.pool.feature_names, T,
                     join(c.out, stem + "_scatter.csv"));
    note(join(c.out, stem + "_scatter.csv"));
  }
}

struct RenderCfg {
  std::string heatmap_path;
  std::string out;
};

void cmd_render(const RenderCfg& c) {
  write_text_file(c.out, render_heatmap_svg(load_heatmap_csv(c.heatmap_path)));
  note(c.out);
}

void add_selection_flags(CLI::App* cmd, HeatmapCfg& c) {
  cmd->add_option("--m", c.params.m, "balanced training subset size");
  cmd->add_option("--k", c.params.k, "dissimilar samples per baseline");
  cmd->add_option("--l", c.params.l, "top features per latent row");
  cmd->add_option("--latent-rows", c.params.h, "latent rows processed (0 = all)");
  cmd->add_option("--n-quad", c.params.n_quad, "quadrature nodes");
  cmd->add_option("--epsilon", c.params.epsilon, "zero-shift guard threshold");
  cmd->add_option("--seed", c.seed, "sampling seed");
  cmd->add_option("--workers", c.workers, "baseline-loop threads (never changes output)");
  cmd->add_option("--baselines", c.baselines_path, "baseline samples CSV");
  cmd->add_option("--n-baselines", c.n_baselines,
                  "held-out baseline count when --baselines is not given");
}

}  // namespace

int run_command(std::vector<std::string> args) {
  CLI::App app{"latent-state interpretation for differentiable time-series models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "config file, key=value lines mirroring flags; flags win");

  SynthCfg synth_cfg;
  CLI::App* synth = app.add_subcommand("synth", "generate a ground-truth scenario");
  synth->add_option("--out", synth_cfg.out, "output directory")->required();
  synth->add_option("--n", synth_cfg.n, "sample count");
  synth->add_option("--steps", synth_cfg.steps, "time steps");
  synth->add_option("--features", synth_cfg.features, "raw feature count");
  synth->add_option("--states", synth_cfg.states, "latent states (block scenario)");
  synth->add_option("--seed", synth_cfg.seed, "generator seed");
  synth->add_option("--scenario", synth_cfg.scenario, "plain | block");
  synth->callback([&] { cmd_synth(synth_cfg); });

  AugmentCfg augment_cfg;
  CLI::App* augment = app.add_subcommand("augment", "fill, augment and normalize a dataset");
  augment->add_option("--data", augment_cfg.data, "input CSV")->required();
  augment->add_option("--out", augment_cfg.out, "output directory")->required();
  augment->add_option("--stats", augment_cfg.stats_path, "apply existing min/max stats");
  augment->add_flag("--normalize", augment_cfg.normalize, "fit min/max here and shift to [1,2]");
  augment->callback([&] { cmd_augment(augment_cfg); });

  AttributeCfg attribute_cfg;
  CLI::App* attribute =
      app.add_subcommand("attribute", "integrated Jacobian for one sample pair");
  attribute->add_option("--model", attribute_cfg.model, "model JSON")->required();
  attribute->add_option("--data", attribute_cfg.data, "dataset CSV")->required();
  attribute->add_option("--test", attribute_cfg.test_id, "test sample id")->required();
  attribute->add_option("--baseline", attribute_cfg.baseline_id, "baseline sample id")
      ->required();
  attribute->add_option("--out", attribute_cfg.out, "output directory")->required();
  attribute->add_option("--n-quad", attribute_cfg.n_quad, "quadrature nodes");
  attribute->add_option("--epsilon", attribute_cfg.epsilon, "zero-shift guard threshold");
  attribute->callback([&] { cmd_attribute(attribute_cfg); });

  HeatmapCfg heatmap_cfg;
  CLI::App* heatmap = app.add_subcommand("heatmap", "contrastive feature heat maps");
  heatmap->add_option("--model", heatmap_cfg.model, "model JSON")->required();
  heatmap->add_option("--data", heatmap_cfg.data, "dataset CSV")->required();
  heatmap->add_option("--out", heatmap_cfg.out, "output directory")->required();
  heatmap->add_option("--direction", heatmap_cfg.direction, "both | positive | negative");
  add_selection_flags(heatmap, heatmap_cfg);
  heatmap->callback([&] { cmd_heatmap(heatmap_cfg); });

  RankCfg rank_cfg;
  CLI::App* rank = app.add_subcommand("rank", "rank latent rows by readout influence");
  rank->add_option("--model", rank_cfg.model, "model JSON")->required();
  rank->add_option("--data", rank_cfg.data, "dataset CSV")->required();
  rank->add_option("--readout", rank_cfg.readout, "readout JSON")->required();
  rank->add_option("--out", rank_cfg.out, "output directory")->required();
  rank->callback([&] { cmd_rank(rank_cfg); });

  HeatmapCfg explain_cfg;
  CLI::App* explain =
      app.add_subcommand("explain", "output -> latent -> feature explanation chain");
  explain->add_option("--model", explain_cfg.model, "model JSON")->required();
  explain->add_option("--data", explain_cfg.data, "dataset CSV")->required();
  explain->add_option("--readout", explain_cfg.readout, "readout JSON")->required();
  explain->add_option("--out", explain_cfg.out, "output directory")->required();
  explain->add_option("--top-n", explain_cfg.top_n, "latent rows to explain");
  add_selection_flags(explain, explain_cfg);
  explain->callback([&] { cmd_explain(explain_cfg); });

  RenderCfg render_cfg;
  CLI::App* render = app.add_subcommand("render", "re-render a heat-map CSV as SVG");
  render->add_option("--heatmap", render_cfg.heatmap_path, "heat-map CSV")->required();
  render->add_option("--out", render_cfg.out, "output SVG path")->required();
  render->callback([&] { cmd_render(render_cfg); });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace latentscope
