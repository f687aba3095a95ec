#pragma once

#include <string>
#include <vector>

#include "latentscope/attribution.hpp"
#include "latentscope/dataset.hpp"
#include "latentscope/features.hpp"
#include "latentscope/heatmap.hpp"
#include "latentscope/readout.hpp"

namespace latentscope {

/// Data CSV: header `sample_id,time,label,<feature names...>`, one row per
/// (sample, step), rows of a sample contiguous and in time order. Every sample
/// shares the same time grid and keeps one label. Empty cells are missing
/// values (NaN in memory).
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& data, const std::string& path);

/// Heat-map CSV: one `# key=value ...` metadata line, a header naming the
/// feature columns, then one integer row per latent label. Write + read gives
/// back the exact same map.
void save_heatmap_csv(const HeatMap& m, const std::string& path);
HeatMap load_heatmap_csv(const std::string& path);

/// Long-form attribution table: one row per (latent row, feature) with the
/// integrated Jacobian entry, the normalized impact, the row's latent shift
/// and its guard flag.
void save_attribution_csv(const PairAttribution& pa, const ImpactMatrix& im,
                          const std::vector<std::string>& feature_names,
                          int step_count, double epsilon, const std::string& path);

/// Per-feature total impact across all latent rows (column norms of j).
void save_projection_csv(const std::vector<double>& projection,
                         const std::vector<std::string>& feature_names,
                         const std::string& path);

void save_stats_csv(const FeatureStats& stats, const std::string& path);
FeatureStats load_stats_csv(const std::string& path);

void save_ranking_csv(const std::vector<RankedLatent>& ranking, int step_count,
                      const std::string& path);

/// Both directions of one latent row side by side.
void save_slice_csv(const HeatMapPair& maps, int row, const std::string& path);

void save_scatter_csv(const ExplanationEntry& entry,
                      const std::vector<std::string>& feature_names, int step_count,
                      const std::string& path);

}  // namespace latentscope
