#pragma once

#include <memory>
#include <string>

#include "latentscope/dataset.hpp"
#include "latentscope/latent_model.hpp"
#include "latentscope/mlp.hpp"
#include "latentscope/ncde.hpp"
#include "latentscope/readout.hpp"

namespace latentscope {

/// Model files are JSON with a "type" tag: "mlp", "ncde_field", or "readout".
/// Writing is deterministic — sorted keys, 17-significant-digit decimals — so
/// save/load round-trips every weight bit-exactly.

std::string model_type(const std::string& path);

MlpSpec load_mlp(const std::string& path);
void save_mlp(const MlpSpec& spec, const std::string& path);

VectorField load_field(const std::string& path);
void save_field(const VectorField& field, const std::string& path);

ReadoutSpec load_readout(const std::string& path);
void save_readout(const ReadoutSpec& readout, const std::string& path);

/// Loads "mlp" as a per-step extractor on the dataset's grid and "ncde_field"
/// as a CDE over it.
std::unique_ptr<LatentModel> load_latent_model(const std::string& path,
                                               const Dataset& data);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace latentscope
