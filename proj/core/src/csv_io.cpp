#include "latentscope/csv_io.hpp"

#include <cmath>
#include <map>
#include <set>

#include "latentscope/errors.hpp"
#include "latentscope/model_io.hpp"
#include "latentscope/text_format.hpp"

namespace latentscope {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    size_t end = line.find(',', start);
    if (end == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

void check_token(const std::string& s, const std::string& what) {
  if (s.empty()) throw InputError(what + " must not be empty");
  for (char c : s)
    if (c == ',' || c == '\n' || c == '\r')
      throw InputError(what + " '" + s + "' contains a separator character");
}

// "# a=1 b=2" -> {a:1, b:2}
std::map<std::string, std::string> parse_metadata(const std::string& line,
                                                  const std::string& path) {
  if (line.size() < 2 || line[0] != '#' || line[1] != ' ')
    throw InputError("'" + path + "': expected a '# key=value ...' metadata line first");
  std::map<std::string, std::string> out;
  size_t pos = 2;
  while (pos < line.size()) {
    size_t end = line.find(' ', pos);
    if (end == std::string::npos) end = line.size();
    if (end > pos) {
      const std::string token = line.substr(pos, end - pos);
      const size_t eq = token.find('=');
      if (eq == std::string::npos)
        throw InputError("'" + path + "': malformed metadata token '" + token + "'");
      out[token.substr(0, eq)] = token.substr(eq + 1);
    }
    pos = end + 1;
  }
  return out;
}

const std::string& meta_value(const std::map<std::string, std::string>& meta,
                              const std::string& key, const std::string& path) {
  auto it = meta.find(key);
  if (it == meta.end())
    throw InputError("'" + path + "': metadata is missing '" + key + "'");
  return it->second;
}

}  // namespace

Dataset load_dataset_csv(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_text_file(path));
  if (lines.empty()) throw InputError("'" + path + "': empty file");
  const std::vector<std::string> header = split_fields(lines[0]);
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "time" ||
      header[2] != "label")
    throw InputError("'" + path +
                     "': header must be sample_id,time,label,<feature names...>");
  Dataset data;
  data.feature_names.assign(header.begin() + 3, header.end());
  for (const std::string& n : data.feature_names)
    check_token(n, "'" + path + "': feature name");
  const size_t D = data.feature_names.size();

  std::set<std::string> seen;
  TimeSeriesSample current;
  std::vector<double> current_times;
  std::vector<double> current_values;

  auto flush = [&]() {
    if (current.id.empty()) return;
    const int T = static_cast<int>(current_times.size());
    current.values = Matrix(T, static_cast<int>(D));
    current.values.data = std::move(current_values);
    if (data.samples.empty()) {
      data.times = current_times;
    } else if (current_times != data.times) {
      throw InputError("'" + path + "': sample '" + current.id +
                       "' has a different time grid than the first sample");
    }
    data.samples.push_back(std::move(current));
    current = {};
    current_times.clear();
    current_values = {};
  };

  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const std::string where = "'" + path + "' line " + std::to_string(ln + 1);
    const std::vector<std::string> f = split_fields(lines[ln]);
    if (f.size() != 3 + D)
      throw InputError(where + ": expected " + std::to_string(3 + D) + " fields, got " +
                       std::to_string(f.size()));
    check_token(f[0], where + ": sample_id");
    if (f[0] != current.id) {
      flush();
      if (!seen.insert(f[0]).second)
        throw InputError(where + ": rows for sample '" + f[0] + "' are not contiguous");
      current.id = f[0];
      current.label = static_cast<int>(parse_int(f[2], where + ": label"));
    } else if (static_cast<int>(parse_int(f[2], where + ": label")) != current.label) {
      throw InputError(where + ": sample '" + f[0] + "' changes label mid-series");
    }
    const double t = parse_double(f[1], where + ": time");
    if (!current_times.empty() && t <= current_times.back())
      throw InputError(where + ": time must increase within sample '" + f[0] + "'");
    current_times.push_back(t);
    for (size_t j = 0; j < D; ++j)
      current_values.push_back(
          f[3 + j].empty()
              ? std::nan("")
              : parse_double(f[3 + j], where + ": feature " + data.feature_names[j]));
  }
  flush();
  data.validate(false);
  return data;
}

void save_dataset_csv(const Dataset& data, const std::string& path) {
  data.validate(false);
  std::string out = "sample_id,time,label";
  for (const std::string& n : data.feature_names) {
    check_token(n, "feature name");
    out += ',';
    out += n;
  }
  out += '\n';
  for (const TimeSeriesSample& s : data.samples) {
    check_token(s.id, "sample id");
    for (size_t n = 0; n < data.times.size(); ++n) {
      out += s.id;
      out += ',';
      out += format_double(data.times[n]);
      out += ',';
      out += std::to_string(s.label);
      for (int j = 0; j < s.values.cols; ++j) {
        out += ',';
        const double v = s.values.at(static_cast<int>(n), j);
        if (!std::isnan(v)) out += format_double(v);
      }
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void save_heatmap_csv(const HeatMap& m, const std::string& path) {
  std::string out = "# direction=";
  out += direction_name(m.direction);
  out += " m=" + std::to_string(m.params.m);
  out += " k=" + std::to_string(m.params.k);
  out += " l=" + std::to_string(m.params.l);
  out += " h=" + std::to_string(m.params.h);
  out += " n_quad=" + std::to_string(m.params.n_quad);
  out += " epsilon=" + format_double(m.params.epsilon);
  out += " seed=" + std::to_string(m.seed);
  out += " n_baselines=" + std::to_string(m.n_baselines);
  out += " dropped=" + std::to_string(m.dropped);
  out += "\nlatent";
  for (const std::string& n : m.col_labels) {
    check_token(n, "feature name");
    out += ',';
    out += n;
  }
  out += '\n';
  for (int r = 0; r < m.counts.rows; ++r) {
    out += m.row_labels[r];
    for (int c = 0; c < m.counts.cols; ++c) {
      out += ',';
      out += std::to_string(m.counts.at(r, c));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

HeatMap load_heatmap_csv(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_text_file(path));
  if (lines.size() < 3)
    throw InputError("'" + path + "': expected metadata, header and at least one row");
  const auto meta = parse_metadata(lines[0], path);
  HeatMap m;
  m.direction = direction_from_name(meta_value(meta, "direction", path));
  m.params.m = static_cast<int>(parse_int(meta_value(meta, "m", path), "'" + path + "': m"));
  m.params.k = static_cast<int>(parse_int(meta_value(meta, "k", path), "'" + path + "': k"));
  m.params.l = static_cast<int>(parse_int(meta_value(meta, "l", path), "'" + path + "': l"));
  m.params.h = static_cast<int>(parse_int(meta_value(meta, "h", path), "'" + path + "': h"));
  m.params.n_quad = static_cast<int>(
      parse_int(meta_value(meta, "n_quad", path), "'" + path + "': n_quad"));
  m.params.epsilon = parse_double(meta_value(meta, "epsilon", path), "'" + path + "': epsilon");
  m.seed = parse_uint(meta_value(meta, "seed", path), "'" + path + "': seed");
  m.n_baselines = static_cast<int>(
      parse_int(meta_value(meta, "n_baselines", path), "'" + path + "': n_baselines"));
  m.dropped = parse_int(meta_value(meta, "dropped", path), "'" + path + "': dropped");

  const std::vector<std::string> header = split_fields(lines[1]);
  if (header.empty() || header[0] != "latent")
    throw InputError("'" + path + "': header must start with 'latent'");
  m.col_labels.assign(header.begin() + 1, header.end());
  const int D = static_cast<int>(m.col_labels.size());
  const int rows = static_cast<int>(lines.size()) - 2;
  m.counts = CountMatrix(rows, D);
  m.row_labels.reserve(rows);
  for (int r = 0; r < rows; ++r) {
    const std::string where = "'" + path + "' line " + std::to_string(r + 3);
    const std::vector<std::string> f = split_fields(lines[r + 2]);
    if (static_cast<int>(f.size()) != D + 1)
      throw InputError(where + ": expected " + std::to_string(D + 1) + " fields");
    m.row_labels.push_back(f[0]);
    for (int c = 0; c < D; ++c) {
      const long long v = parse_int(f[c + 1], where + ": count");
      if (v < 0) throw InputError(where + ": negative count");
      m.counts.at(r, c) = v;
    }
  }
  if (m.params.h != rows)
    throw InputError("'" + path + "': metadata h=" + std::to_string(m.params.h) +
                     " does not match " + std::to_string(rows) + " rows");
  return m;
}

void save_attribution_csv(const PairAttribution& pa, const ImpactMatrix& im,
                          const std::vector<std::string>& feature_names,
                          int step_count, double epsilon, const std::string& path) {
  if (pa.j.cols != static_cast<int>(feature_names.size()))
    throw InputError("attribution csv: " + std::to_string(feature_names.size()) +
                     " feature names for " + std::to_string(pa.j.cols) + " columns");
  std::string out = "# baseline=" + pa.baseline_id + " test=" + pa.test_id +
                    " n_quad=" + std::to_string(pa.n_quad) +
                    " epsilon=" + format_double(epsilon) + "\n";
  out += "latent,state,time_index,feature,j,p,delta_z,guarded\n";
  for (int r = 0; r < pa.j.rows; ++r) {
    const std::string label = latent_row_label(r, step_count);
    for (int c = 0; c < pa.j.cols; ++c) {
      out += label;
      out += ',' + std::to_string(r / step_count);
      out += ',' + std::to_string(r % step_count);
      out += ',' + feature_names[c];
      out += ',' + format_double(pa.j.at(r, c));
      out += ',' + format_double(im.p.at(r, c));
      out += ',' + format_double(pa.delta_z[r]);
      out += ',';
      out += im.guarded[r] ? '1' : '0';
      out += '\n';
    }
  }
  write_text_file(path, out);
}

void save_projection_csv(const std::vector<double>& projection,
                         const std::vector<std::string>& feature_names,
                         const std::string& path) {
  if (projection.size() != feature_names.size())
    throw InputError("projection csv: name/value count mismatch");
  std::string out = "feature,total_impact\n";
  for (size_t i = 0; i < projection.size(); ++i)
    out += feature_names[i] + ',' + format_double(projection[i]) + '\n';
  write_text_file(path, out);
}

void save_stats_csv(const FeatureStats& stats, const std::string& path) {
  if (stats.names.size() != stats.min.size() || stats.names.size() != stats.max.size())
    throw InputError("stats csv: inconsistent field lengths");
  std::string out = "feature,min,max\n";
  for (size_t i = 0; i < stats.names.size(); ++i) {
    check_token(stats.names[i], "feature name");
    out += stats.names[i] + ',' + format_double(stats.min[i]) + ',' +
           format_double(stats.max[i]) + '\n';
  }
  write_text_file(path, out);
}

FeatureStats load_stats_csv(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_text_file(path));
  if (lines.empty() || split_fields(lines[0]) != std::vector<std::string>{"feature", "min", "max"})
    throw InputError("'" + path + "': header must be feature,min,max");
  FeatureStats stats;
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const std::string where = "'" + path + "' line " + std::to_string(ln + 1);
    const std::vector<std::string> f = split_fields(lines[ln]);
    if (f.size() != 3) throw InputError(where + ": expected feature,min,max");
    stats.names.push_back(f[0]);
    stats.min.push_back(parse_double(f[1], where + ": min"));
    stats.max.push_back(parse_double(f[2], where + ": max"));
    if (stats.max.back() < stats.min.back())
      throw InputError(where + ": max below min for feature " + f[0]);
  }
  if (stats.names.empty()) throw InputError("'" + path + "': no feature rows");
  return stats;
}

void save_ranking_csv(const std::vector<RankedLatent>& ranking, int step_count,
                      const std::string& path) {
  std::string out = "rank,latent,state,time_index,score,sign\n";
  for (size_t i = 0; i < ranking.size(); ++i) {
    const RankedLatent& r = ranking[i];
    out += std::to_string(i);
    out += ',' + latent_row_label(r.row, step_count);
    out += ',' + std::to_string(r.state);
    out += ',' + std::to_string(r.time_index);
    out += ',' + format_double(r.score);
    out += ',' + std::to_string(r.sign);
    out += '\n';
  }
  write_text_file(path, out);
}

void save_slice_csv(const HeatMapPair& maps, int row, const std::string& path) {
  if (row < 0 || row >= maps.pos.counts.rows)
    throw InputError("slice csv: row " + std::to_string(row) + " out of range");
  std::string out = "direction,latent";
  for (const std::string& n : maps.pos.col_labels) out += ',' + n;
  out += '\n';
  for (const HeatMap* m : {&maps.pos, &maps.neg}) {
    out += direction_name(m->direction);
    out += ',' + m->row_labels[row];
    for (int c = 0; c < m->counts.cols; ++c) out += ',' + std::to_string(m->counts.at(row, c));
    out += '\n';
  }
  write_text_file(path, out);
}

void save_scatter_csv(const ExplanationEntry& entry,
                      const std::vector<std::string>& feature_names, int step_count,
                      const std::string& path) {
  std::string out = "# row=" + latent_row_label(entry.latent.row, step_count) +
                    " feature_a=" + feature_names[entry.feature_a] +
                    " feature_b=" + feature_names[entry.feature_b] + "\n";
  out += "sample_id,label,feature_a,feature_b,latent\n";
  for (const ScatterPoint& pt : entry.scatter) {
    out += pt.sample_id;
    out += ',' + std::to_string(pt.label);
    out += ',' + format_double(pt.feature_a);
    out += ',' + format_double(pt.feature_b);
    out += ',' + format_double(pt.latent);
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace latentscope
