#include "supergrid/cli.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "supergrid/diagnostics.hpp"
#include "supergrid/error.hpp"
#include "supergrid/fixtures.hpp"
#include "supergrid/random.hpp"
#include "supergrid/render.hpp"
#include "supergrid/smoothing.hpp"

#ifndef SUPERGRID_VERSION
#define SUPERGRID_VERSION "0.0.0"
#endif

namespace supergrid {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

struct Inputs {
  std::vector<InputFile> files;

  std::string read(const std::string& role, const std::string& path) {
    std::string text = read_file(path);
    files.push_back({role, path, sha256_hex(text)});
    return text;
  }
};

template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

LabeledMatrix load_input_matrix(const RunConfig& cfg, Inputs& inputs) {
  const std::string text = inputs.read("matrix", cfg.matrix_path);
  return with_path(cfg.matrix_path, [&] { return parse_matrix_csv(text, cfg.csv); });
}

std::optional<Ordering> resolve_order(const OrderSpec& spec, Axis axis, const LabeledMatrix& m) {
  const bool rows = axis == Axis::row;
  const std::size_t n = rows ? m.rows() : m.cols();
  const char* key = rows ? "order_rows" : "order_cols";
  switch (spec.kind) {
    case OrderSpec::Kind::none: return std::nullopt;
    case OrderSpec::Kind::mean_ascending:
    case OrderSpec::Kind::mean_descending: {
      const auto dir = spec.kind == OrderSpec::Kind::mean_ascending ? SortDirection::ascending : SortDirection::descending;
      return rows ? order_by_row_mean(m, dir) : order_by_col_mean(m, dir);
    }
    case OrderSpec::Kind::positions:
      if (spec.positions.size() != n)
        throw Error(std::string(key) + " has " + std::to_string(spec.positions.size()) + " entries, matrix has " +
                    std::to_string(n) + (rows ? " rows" : " columns"));
      return Ordering(axis, spec.positions);
    case OrderSpec::Kind::names: {
      const auto& names = rows ? m.row_names() : m.col_names();
      if (spec.names.size() != n)
        throw Error(std::string(key) + " has " + std::to_string(spec.names.size()) + " entries, matrix has " +
                    std::to_string(n) + (rows ? " rows" : " columns"));
      std::map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
      std::vector<std::size_t> perm;
      for (const auto& name : spec.names) {
        const auto it = index.find(name);
        if (it == index.end()) throw Error(std::string(key) + ": unknown name '" + name + "'");
        perm.push_back(it->second);
      }
      return Ordering(axis, std::move(perm));
    }
  }
  return std::nullopt;
}

DistanceMatrix object_distances(const LabeledMatrix& objects, DistanceKind kind) {
  switch (kind) {
    case DistanceKind::euclidean: return euclidean_distance_matrix(objects);
    case DistanceKind::cosine: return cosine_distance_matrix(cosine_similarity(objects));
    case DistanceKind::similarity: return distances_from_similarity(objects);
  }
  throw Error("unknown distance");
}

Membership membership_from_labels(const std::vector<std::string>& labels) {
  std::string csv;
  for (std::size_t i = 0; i < labels.size(); ++i) csv += std::to_string(i + 1) + "," + csv_escape(labels[i]) + "\n";
  return parse_membership_csv(csv);
}

struct AxisResult {
  std::optional<Membership> membership;
  std::optional<Dendrogram> dendrogram;
};

AxisResult resolve_structure(const RunConfig& cfg, Axis axis, const LabeledMatrix& m, Inputs& inputs) {
  const bool rows = axis == Axis::row;
  const AxisStructure& s = rows ? cfg.rows : cfg.cols;
  const std::string which = rows ? "rows" : "cols";
  AxisResult out;
  if (s.membership_path) {
    const std::string text = inputs.read("membership_" + which, *s.membership_path);
    out.membership = with_path(*s.membership_path, [&] { return parse_membership_csv(text); });
    return out;
  }
  if (s.membership_labels) {
    out.membership = membership_from_labels(*s.membership_labels);
    return out;
  }
  if (!s.n_clusters && !s.dendrogram) return out;

  if (m.has_missing()) throw Error("cannot cluster " + which + " of a matrix with missing values");
  const LabeledMatrix objects = rows ? m : m.transposed();
  const DistanceKind dist = cfg.distance.value_or(DistanceKind::euclidean);
  if (s.dendrogram) {
    out.dendrogram = hcluster(object_distances(objects, dist), cfg.linkage);
    return out;
  }
  const std::size_t k = *s.n_clusters;
  switch (cfg.method) {
    case ClusterMethod::kmeans: {
      KMeansOptions ko;
      ko.seed = derive_seed(cfg.seed, rows ? 1 : 2);
      out.membership = kmeans(objects, k, ko);
      break;
    }
    case ClusterMethod::pam: out.membership = pam(object_distances(objects, dist), k); break;
    case ClusterMethod::hierarchical:
      out.membership = cut_dendrogram(hcluster(object_distances(objects, dist), cfg.linkage), k);
      break;
  }
  return out;
}

AdjacentSeries make_series(const PanelConfig& p, PanelSide side, std::size_t n, const CsvOptions& csv, Inputs& inputs) {
  AdjacentSeries s;
  s.side = side;
  s.plot_type = p.plot_type;
  s.axis_name = p.axis_name;
  s.point_colors = p.obs_colors;
  s.point_alpha = p.point_alpha;
  s.bar_colors = p.bar_colors;
  s.line_color = p.line_color;
  s.smooth_span = p.smooth_span;
  if (p.path) {
    const std::string text = inputs.read(side == PanelSide::top ? "yt" : "yr", *p.path);
    s.values = with_path(*p.path, [&] { return parse_series_csv(text, csv); });
  } else if (p.values) {
    s.values = *p.values;
  } else {
    s.values.assign(n, std::nullopt);
  }
  return s;
}

void write_atomically(const std::vector<std::pair<std::string, std::string>>& files) {
  std::vector<std::string> temps;
  auto cleanup = [&] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    const std::string tmp = path + ".tmp";
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      cleanup();
      throw Error("cannot write '" + path + "'");
    }
    temps.push_back(tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) {
      cleanup();
      throw Error("cannot write '" + path + "'");
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw Error("cannot write '" + files[i].first + "': " + ec.message());
    }
  }
}

std::string manifest_json(const std::string& command, std::uint64_t seed, const std::vector<InputFile>& inputs,
                          const std::vector<std::pair<std::string, std::string>>& outputs) {
  json j;
  j["tool"] = "supergrid";
  j["version"] = SUPERGRID_VERSION;
  j["command"] = command;
  j["seed"] = seed;
  j["inputs"] = json::array();
  for (const auto& in : inputs) j["inputs"].push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  j["outputs"] = json::array();
  for (const auto& [path, content] : outputs) j["outputs"].push_back({{"path", path}, {"sha256", sha256_hex(content)}});
  return j.dump(2) + "\n";
}

/// Writes outputs plus a manifest named after the first output.
void commit(const std::string& command, const RunConfig& cfg, std::vector<InputFile> inputs,
            std::vector<std::pair<std::string, std::string>> outputs, std::ostream& out) {
  const std::string manifest_path = outputs.front().first + ".manifest.json";
  const std::string manifest = manifest_json(command, cfg.seed, inputs, outputs);
  outputs.emplace_back(manifest_path, manifest);
  write_atomically(outputs);
  for (const auto& [path, content] : outputs) out << "wrote " << path << "\n";
}

const std::string& require_output(const RunConfig& cfg) {
  if (!cfg.output) throw ConfigError("output", "required key is missing (set it in the config or pass --out)");
  return *cfg.output;
}

std::string diagnose_csv(const std::vector<StabilityReport>& reports) {
  std::string csv = "k,mean_jaccard,mean_silhouette\n";
  for (const auto& r : reports)
    csv += std::to_string(r.k) + "," + format_number(r.mean_pairwise_jaccard) + "," + format_number(r.mean_silhouette) + "\n";
  return csv;
}

std::uint64_t parse_seed(const std::string& text, const std::string& where) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) throw ConfigError(where, "expected a non-negative integer seed, got '" + text + "'");
  return v;
}

const std::vector<std::string> kPathKeys = {"matrix", "output", "membership_rows", "membership_cols", "yt", "yr"};

struct CommandLine {
  std::string config_path;
  std::string matrix;
  std::string out;
  std::string seed;
  std::vector<std::string> extras;
};

/// Config document after file, flags and overrides are merged.
RunConfig load_run_config(const CommandLine& cl, std::vector<InputFile>& inputs) {
  std::uint64_t default_seed = 0;
  if (const char* env = std::getenv("SUPERGRID_SEED"); env && *env) default_seed = parse_seed(env, "SUPERGRID_SEED");

  json doc = json::object();
  fs::path base;
  if (!cl.config_path.empty()) {
    std::string text;
    try {
      text = read_file(cl.config_path);
    } catch (const Error& e) {
      throw ConfigError("--config", e.what());
    }
    inputs.push_back({"config", cl.config_path, sha256_hex(text)});
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("$", std::string("invalid JSON in '") + cl.config_path + "': " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("$", "the config must be a JSON object");
    base = fs::path(cl.config_path).parent_path();
  }
  auto absolute = [](const std::string& p) { return fs::absolute(fs::path(p)).lexically_normal().string(); };
  for (const auto& arg : cl.extras) {
    if (arg.rfind("--", 0) != 0 || arg.find('=') == std::string::npos)
      throw ConfigError(arg, "overrides take the form --key=value");
    std::string key = arg.substr(2, arg.find('=') - 2);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string raw = arg.substr(arg.find('=') + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    if (value.is_string() && std::find(kPathKeys.begin(), kPathKeys.end(), key) != kPathKeys.end())
      value = absolute(value.get<std::string>());
    doc[key] = value;
  }
  if (!cl.matrix.empty()) doc["matrix"] = absolute(cl.matrix);
  if (!cl.out.empty()) doc["output"] = absolute(cl.out);
  if (!cl.seed.empty()) doc["seed"] = parse_seed(cl.seed, "--seed");
  return parse_config(doc.dump(), base, default_seed);
}

void cmd_render(const CommandLine& cl, std::ostream& out) {
  std::vector<InputFile> inputs;
  const RunConfig cfg = load_run_config(cl, inputs);
  const std::string& output = require_output(cfg);
  FigureJob job = build_figure(cfg);
  const std::string svg = render_svg(job.spec, job.matrix);
  inputs.insert(inputs.end(), job.inputs.begin(), job.inputs.end());
  commit("render", cfg, std::move(inputs), {{output, svg}}, out);
}

void cmd_smooth(const CommandLine& cl, std::ostream& out) {
  std::vector<InputFile> inputs;
  const RunConfig cfg = load_run_config(cl, inputs);
  const std::string& output = require_output(cfg);
  std::vector<InputFile> used;
  const std::string csv = smooth_csv(cfg, &used);
  inputs.insert(inputs.end(), used.begin(), used.end());
  commit("smooth", cfg, std::move(inputs), {{output, csv}}, out);
}

void cmd_diagnose(const CommandLine& cl, std::ostream& out) {
  std::vector<InputFile> inputs;
  const RunConfig cfg = load_run_config(cl, inputs);
  const std::string& output = require_output(cfg);
  Inputs used;
  const LabeledMatrix m = load_input_matrix(cfg, used);
  if (m.has_missing()) throw Error("cannot run diagnostics on a matrix with missing values");

  StabilityOptions o;
  o.k_min = cfg.k_min;
  o.k_max = cfg.k_max;
  o.method = cfg.diagnose_method;
  o.subsamples = cfg.subsamples;
  o.fraction = cfg.subsample_fraction;
  o.seed = cfg.seed;
  std::vector<StabilityReport> reports;
  if (cfg.diagnose_method == StabilityMethod::kmeans) {
    if (cfg.diagnose_distance != DistanceKind::cosine)
      throw ConfigError("diagnose_distance", "k-means diagnostics report cosine silhouettes; use cosine");
    reports = stability_curve(m, o);
  } else if (cfg.diagnose_distance == DistanceKind::cosine) {
    reports = stability_curve(m, o);
  } else {
    reports = stability_curve(object_distances(m, cfg.diagnose_distance), o);
  }

  LineChartSeries jac{"mean Jaccard", {}, {}};
  LineChartSeries sil{"mean silhouette", {}, {}};
  for (const auto& r : reports) {
    jac.x.push_back(static_cast<double>(r.k));
    jac.y.push_back(r.mean_pairwise_jaccard);
    sil.x.push_back(static_cast<double>(r.k));
    sil.y.push_back(r.mean_silhouette);
  }
  const fs::path p(output);
  const std::string stem = (p.parent_path() / p.stem()).string();
  inputs.insert(inputs.end(), used.files.begin(), used.files.end());
  commit("diagnose", cfg, std::move(inputs),
         {{output, diagnose_csv(reports)},
          {stem + "_jaccard.svg", render_line_chart(jac, "k", "Cluster stability over subsamples")},
          {stem + "_silhouette.svg", render_line_chart(sil, "k", "Cosine silhouette width")}},
         out);
}

void cmd_fixtures(const CommandLine& cl, std::ostream& out) {
  if (cl.out.empty()) throw ConfigError("--out", "required: directory to write the fixtures into");
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("SUPERGRID_SEED"); env && *env) seed = parse_seed(env, "SUPERGRID_SEED");
  if (!cl.seed.empty()) seed = parse_seed(cl.seed, "--seed");
  const auto files = fixtures::bundled(seed);
  std::error_code ec;
  fs::create_directories(cl.out, ec);
  if (ec) throw Error("cannot create directory '" + cl.out + "': " + ec.message());
  std::vector<std::pair<std::string, std::string>> outputs;
  for (const auto& f : files) outputs.emplace_back((fs::path(cl.out) / f.name).string(), f.content);
  write_atomically(outputs);
  for (const auto& [path, content] : outputs) out << "wrote " << path << "\n";
}

}  // namespace

FigureJob build_figure(const RunConfig& cfg) {
  Inputs inputs;
  LabeledMatrix m = load_input_matrix(cfg, inputs);
  FigureSpec spec = cfg.figure;
  spec.palette = cfg.palette;
  spec.palette_breaks = cfg.palette_values;
  spec.na_color = cfg.na_color;
  spec.row_order = resolve_order(cfg.order_rows, Axis::row, m);
  spec.col_order = resolve_order(cfg.order_cols, Axis::column, m);
  AxisResult rows = resolve_structure(cfg, Axis::row, m, inputs);
  AxisResult cols = resolve_structure(cfg, Axis::column, m, inputs);
  spec.row_membership = std::move(rows.membership);
  spec.row_dendrogram = std::move(rows.dendrogram);
  spec.col_membership = std::move(cols.membership);
  spec.col_dendrogram = std::move(cols.dendrogram);
  spec.smooth_heat = cfg.smooth_heat;
  spec.smooth_stat = cfg.smooth_stat;
  if (cfg.yt) spec.top_panel = make_series(*cfg.yt, PanelSide::top, m.cols(), cfg.csv, inputs);
  if (cfg.yr) spec.right_panel = make_series(*cfg.yr, PanelSide::right, m.rows(), cfg.csv, inputs);
  return FigureJob{std::move(spec), std::move(m), std::move(inputs.files)};
}

std::string smooth_csv(const RunConfig& cfg, std::vector<InputFile>* used) {
  Inputs inputs;
  const LabeledMatrix m = load_input_matrix(cfg, inputs);
  AxisResult rows = resolve_structure(cfg, Axis::row, m, inputs);
  AxisResult cols = resolve_structure(cfg, Axis::column, m, inputs);
  const Membership rm = rows.membership.value_or(Membership::singletons(m.rows()).with_label_names(m.row_names()));
  const Membership cm = cols.membership.value_or(Membership::singletons(m.cols()).with_label_names(m.col_names()));
  if (rm.size() != m.rows())
    throw Error("row membership covers " + std::to_string(rm.size()) + " objects, matrix has " + std::to_string(m.rows()) + " rows");
  if (cm.size() != m.cols())
    throw Error("column membership covers " + std::to_string(cm.size()) + " objects, matrix has " + std::to_string(m.cols()) +
                " columns");
  const std::string csv = matrix_to_csv(smooth_by_cluster(m, rm, cm, cfg.smooth_stat).as_matrix());
  if (used) *used = std::move(inputs.files);
  return csv;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extendable heatmaps: render, diagnose and smooth clustered matrices", "supergrid"};
  app.require_subcommand(1);
  CommandLine cl;
  auto add_common = [&](CLI::App* sub, bool overrides) {
    sub->add_option("--config", cl.config_path, "JSON config file");
    sub->add_option("--matrix", cl.matrix, "Matrix CSV (overrides the config)");
    sub->add_option("--out", cl.out, "Output path (overrides the config)");
    sub->add_option("--seed", cl.seed, "Random seed (default: config, then SUPERGRID_SEED, then 0)");
    if (overrides) sub->allow_extras();
  };
  CLI::App* render = app.add_subcommand("render", "Render a heatmap figure to SVG");
  CLI::App* diagnose = app.add_subcommand("diagnose", "Cluster stability and silhouette over a range of k");
  CLI::App* smooth = app.add_subcommand("smooth", "Write the cluster-smoothed block matrix as CSV");
  CLI::App* fixtures = app.add_subcommand("fixtures", "Write the bundled example data and configs");
  add_common(render, true);
  add_common(diagnose, true);
  add_common(smooth, true);
  fixtures->add_option("--out", cl.out, "Directory to write into")->required();
  fixtures->add_option("--seed", cl.seed, "Random seed for the synthetic data");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (render->parsed()) {
      cl.extras = render->remaining();
      cmd_render(cl, out);
    } else if (diagnose->parsed()) {
      cl.extras = diagnose->remaining();
      cmd_diagnose(cl, out);
    } else if (smooth->parsed()) {
      cl.extras = smooth->remaining();
      cmd_smooth(cl, out);
    } else {
      cmd_fixtures(cl, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace supergrid
