#include "latentscope/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latentscope/errors.hpp"
#include "latentscope/text_format.hpp"

namespace latentscope {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw RuntimeFailure("read failed on '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw RuntimeFailure("cannot create directory '" + p.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot write file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw RuntimeFailure("write failed on '" + path + "'");
}

namespace {

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

const json& require_field(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(ctx + ": missing field '" + std::string(key) + "'");
  return j.at(key);
}

int require_int(const json& j, const char* key, const std::string& ctx) {
  const json& v = require_field(j, key, ctx);
  if (!v.is_number_integer())
    throw InputError(ctx + ": field '" + std::string(key) + "' must be an integer");
  return v.get<int>();
}

double number_or_throw(const json& v, const std::string& what) {
  if (!v.is_number()) throw InputError(what + " must be a number");
  return v.get<double>();
}

std::vector<double> require_double_array(const json& j, const char* key,
                                         const std::string& ctx) {
  const json& v = require_field(j, key, ctx);
  if (!v.is_array())
    throw InputError(ctx + ": field '" + std::string(key) + "' must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (size_t i = 0; i < v.size(); ++i)
    out.push_back(number_or_throw(v[i], ctx + ": '" + key + "'[" + std::to_string(i) + "]"));
  return out;
}

MlpSpec parse_mlp(const json& j, const std::string& ctx) {
  MlpSpec spec;
  const json& dims = require_field(j, "layer_dims", ctx);
  if (!dims.is_array() || dims.size() < 2)
    throw InputError(ctx + ": 'layer_dims' must be an array of at least 2 sizes");
  for (const json& d : dims) {
    if (!d.is_number_integer())
      throw InputError(ctx + ": 'layer_dims' entries must be integers");
    spec.layer_dims.push_back(d.get<int>());
  }
  const size_t L = spec.layer_dims.size() - 1;

  const json& acts = require_field(j, "activations", ctx);
  if (!acts.is_array() || acts.size() != L)
    throw InputError(ctx + ": 'activations' must list " + std::to_string(L) + " names");
  for (const json& a : acts) {
    if (!a.is_string()) throw InputError(ctx + ": 'activations' entries must be strings");
    spec.activations.push_back(activation_from_name(a.get<std::string>()));
  }

  const json& ws = require_field(j, "weights", ctx);
  if (!ws.is_array() || ws.size() != L)
    throw InputError(ctx + ": 'weights' must hold " + std::to_string(L) + " layers");
  const json& bs = require_field(j, "biases", ctx);
  if (!bs.is_array() || bs.size() != L)
    throw InputError(ctx + ": 'biases' must hold " + std::to_string(L) + " layers");
  for (size_t l = 0; l < L; ++l) {
    const int in = spec.layer_dims[l];
    const int out = spec.layer_dims[l + 1];
    const std::string wctx = ctx + ": 'weights'[" + std::to_string(l) + "]";
    if (!ws[l].is_array() || static_cast<int>(ws[l].size()) != in * out)
      throw InputError(wctx + " must hold " + std::to_string(in * out) +
                       " row-major entries");
    Matrix W(out, in);
    for (int i = 0; i < in * out; ++i)
      W.data[i] = number_or_throw(ws[l][i], wctx + "[" + std::to_string(i) + "]");
    spec.weights.push_back(std::move(W));

    const std::string bctx = ctx + ": 'biases'[" + std::to_string(l) + "]";
    if (!bs[l].is_array() || static_cast<int>(bs[l].size()) != out)
      throw InputError(bctx + " must hold " + std::to_string(out) + " entries");
    std::vector<double> b(out);
    for (int i = 0; i < out; ++i)
      b[i] = number_or_throw(bs[l][i], bctx + "[" + std::to_string(i) + "]");
    spec.biases.push_back(std::move(b));
  }
  spec.validate();
  return spec;
}

json mlp_to_json(const MlpSpec& spec) {
  json j;
  j["type"] = "mlp";
  j["layer_dims"] = spec.layer_dims;
  json acts = json::array();
  for (Activation a : spec.activations) acts.push_back(activation_name(a));
  j["activations"] = std::move(acts);
  json ws = json::array();
  for (const Matrix& W : spec.weights) ws.push_back(W.data);
  j["weights"] = std::move(ws);
  j["biases"] = spec.biases;
  return j;
}

// Deterministic writer: object keys come out in nlohmann's sorted order and
// every float is printed with 17 significant digits, so identical models give
// identical bytes and reload bit-exactly.
void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

bool all_primitive(const json& arr) {
  for (const json& v : arr)
    if (v.is_structured()) return false;
  return true;
}

void dump_json(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string pad1(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad1;
        escape_string(it.key(), out);
        out += ": ";
        dump_json(it.value(), out, indent + 1);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = all_primitive(j);
      out += '[';
      if (!flat) out += '\n';
      for (size_t i = 0; i < j.size(); ++i) {
        if (!flat) out += pad1;
        dump_json(j[i], out, indent + 1);
        if (i + 1 < j.size()) out += flat ? ", " : ",";
        if (!flat) out += '\n';
      }
      if (!flat) out += pad;
      out += ']';
      return;
    }
    case json::value_t::string:
      escape_string(j.get<std::string>(), out);
      return;
    case json::value_t::number_float:
      out += format_double17(j.get<double>());
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    default:
      out += "null";
      return;
  }
}

void save_json(const json& j, const std::string& path) {
  std::string text;
  dump_json(j, text, 0);
  text += '\n';
  write_text_file(path, text);
}

std::string require_type(const json& j, const std::string& path) {
  const json& t = require_field(j, "type", "'" + path + "'");
  if (!t.is_string()) throw InputError("'" + path + "': field 'type' must be a string");
  return t.get<std::string>();
}

}  // namespace

std::string model_type(const std::string& path) {
  return require_type(parse_json_file(path), path);
}

MlpSpec load_mlp(const std::string& path) {
  const json j = parse_json_file(path);
  const std::string type = require_type(j, path);
  if (type != "mlp")
    throw InputError("'" + path + "': expected type 'mlp', found '" + type + "'");
  return parse_mlp(j, "'" + path + "'");
}

void save_mlp(const MlpSpec& spec, const std::string& path) {
  spec.validate();
  save_json(mlp_to_json(spec), path);
}

VectorField load_field(const std::string& path) {
  const json j = parse_json_file(path);
  const std::string type = require_type(j, path);
  if (type != "ncde_field")
    throw InputError("'" + path + "': expected type 'ncde_field', found '" + type + "'");
  const std::string ctx = "'" + path + "'";
  VectorField field;
  field.latent_dim = require_int(j, "latent_dim", ctx);
  field.input_dim = require_int(j, "input_dim", ctx);
  field.mlp = parse_mlp(require_field(j, "mlp", ctx), ctx + ": 'mlp'");
  if (j.contains("z0")) field.z0 = require_double_array(j, "z0", ctx);
  if (j.contains("steps_per_interval"))
    field.steps_per_interval = require_int(j, "steps_per_interval", ctx);
  field.validate();
  return field;
}

void save_field(const VectorField& field, const std::string& path) {
  field.validate();
  json j;
  j["type"] = "ncde_field";
  j["latent_dim"] = field.latent_dim;
  j["input_dim"] = field.input_dim;
  j["steps_per_interval"] = field.steps_per_interval;
  if (!field.z0.empty()) j["z0"] = field.z0;
  json m = mlp_to_json(field.mlp);
  m.erase("type");
  j["mlp"] = std::move(m);
  save_json(j, path);
}

ReadoutSpec load_readout(const std::string& path) {
  const json j = parse_json_file(path);
  const std::string type = require_type(j, path);
  if (type != "readout")
    throw InputError("'" + path + "': expected type 'readout', found '" + type + "'");
  const std::string ctx = "'" + path + "'";
  ReadoutSpec readout;
  readout.weights = require_double_array(j, "weights", ctx);
  readout.bias = number_or_throw(require_field(j, "bias", ctx), ctx + ": 'bias'");
  readout.validate();
  return readout;
}

void save_readout(const ReadoutSpec& readout, const std::string& path) {
  readout.validate();
  json j;
  j["type"] = "readout";
  j["weights"] = readout.weights;
  j["bias"] = readout.bias;
  save_json(j, path);
}

std::unique_ptr<LatentModel> load_latent_model(const std::string& path,
                                               const Dataset& data) {
  const json j = parse_json_file(path);
  const std::string type = require_type(j, path);
  if (type == "mlp") {
    MlpSpec spec = parse_mlp(j, "'" + path + "'");
    if (spec.input_dim() != data.feature_count())
      throw InputError("'" + path + "': model expects " +
                       std::to_string(spec.input_dim()) + " features, data has " +
                       std::to_string(data.feature_count()));
    return std::make_unique<MlpLatentModel>(std::move(spec), data.step_count());
  }
  if (type == "ncde_field") {
    VectorField field = load_field(path);
    if (field.input_dim != data.feature_count())
      throw InputError("'" + path + "': field expects " +
                       std::to_string(field.input_dim) + " features, data has " +
                       std::to_string(data.feature_count()));
    return std::make_unique<NcdeLatentModel>(std::move(field), data.times);
  }
  throw InputError("'" + path + "': type '" + type + "' is not a latent model");
}

}  // namespace latentscope
