#include "gkdv/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace gkdv {

ConfigError::ConfigError(std::string origin, int line, std::string path, const std::string& message)
    : std::runtime_error(origin + ":" + std::to_string(line) + ": " + (path.empty() ? "<root>" : path) + ": " +
                         message),
      origin_(std::move(origin)),
      line_(line),
      path_(std::move(path)) {}

int LineIndex::line(std::string path) const {
  for (;;) {
    if (auto it = lines_.find(path); it != lines_.end()) return it->second;
    const auto cut = path.find_last_of(".[");
    if (cut == std::string::npos) break;
    path.resize(cut);
  }
  auto it = lines_.find("");
  return it == lines_.end() ? 0 : it->second;
}

namespace {

// Input iterator that publishes how far the parser has read.
struct TrackingIterator {
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  const char* p = nullptr;
  const char** mark = nullptr;

  reference operator*() const { return *p; }
  TrackingIterator& operator++() {
    ++p;
    *mark = p;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const TrackingIterator& o) const { return p == o.p; }
  bool operator!=(const TrackingIterator& o) const { return p != o.p; }
};

// Records the line of every key and container start by JSON path.
class LineRecorder : public nlohmann::json_sax<json> {
 public:
  LineRecorder(const char* begin, const char** mark) : begin_(begin), mark_(mark) {}

  std::map<std::string, int> lines;

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override { return open(false); }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    frames_.back().key = k;
    lines.emplace(path(), current_line());
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool array = false;
    std::size_t index = 0;
    std::string key;
  };

  int current_line() const {
    // The lexer may have consumed one character of lookahead.
    const char* end = *mark_ > begin_ ? *mark_ - 1 : begin_;
    return 1 + static_cast<int>(std::count(begin_, end, '\n'));
  }

  std::string path() const {
    std::string p;
    for (const Frame& f : frames_) {
      if (f.array) {
        p += "[" + std::to_string(f.index) + "]";
      } else {
        if (!p.empty()) p += ".";
        p += f.key;
      }
    }
    return p;
  }

  bool value() {
    if (!frames_.empty() && frames_.back().array) {
      lines.emplace(path(), current_line());
      ++frames_.back().index;
    }
    return true;
  }
  bool open(bool array) {
    if (frames_.empty() || frames_.back().array) lines.emplace(path(), current_line());
    frames_.push_back({array, 0, {}});
    return true;
  }
  bool close() {
    frames_.pop_back();
    if (!frames_.empty() && frames_.back().array) ++frames_.back().index;
    return true;
  }

  const char* begin_;
  const char** mark_;
  std::vector<Frame> frames_;
};

std::string type_name(const json& j) { return j.type_name(); }

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ParsedDocument parse_document(std::string_view text, const std::string& origin) {
  ParsedDocument doc;
  try {
    doc.value = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + at, '\n'));
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ConfigError(origin, line, "", msg);
  }
  const char* mark = text.data();
  LineRecorder rec(text.data(), &mark);
  TrackingIterator first{text.data(), &mark}, last{text.data() + text.size(), &mark};
  json::sax_parse(first, last, &rec);
  rec.lines.emplace("", 1);
  doc.lines = LineIndex(origin, std::move(rec.lines));
  return doc;
}

ConfigNode::ConfigNode(const json& j, std::string path, std::shared_ptr<const LineIndex> lines)
    : j_(&j), path_(std::move(path)), lines_(std::move(lines)) {
  if (!j.is_object()) fail("", "expected an object, found " + type_name(j));
}

std::string ConfigNode::join(const std::string& key) const {
  if (key.empty()) return path_;
  return path_.empty() ? key : path_ + "." + key;
}

void ConfigNode::fail(const std::string& key, const std::string& message) const {
  const std::string p = join(key);
  throw ConfigError(lines_ ? lines_->origin() : "<config>", lines_ ? lines_->line(p) : 0, p, message);
}

bool ConfigNode::has(const std::string& key) const { return j_->contains(key); }

const json& ConfigNode::raw(const std::string& key) const { return at(key); }

const json& ConfigNode::at(const std::string& key) const {
  used_.insert(key);
  if (!j_->contains(key)) fail(key, "required field is missing");
  return (*j_)[key];
}

double ConfigNode::number(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number()) fail(key, "expected a number, found " + type_name(v));
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(key, "must be finite");
  return d;
}

double ConfigNode::number(const std::string& key, double fallback) const {
  used_.insert(key);
  return has(key) ? number(key) : fallback;
}

int ConfigNode::integer(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_number_integer()) fail(key, "expected an integer, found " + type_name(v));
  const auto i = v.get<long long>();
  if (i < -2147483647LL || i > 2147483647LL) fail(key, "integer out of range");
  return static_cast<int>(i);
}

int ConfigNode::integer(const std::string& key, int fallback) const {
  used_.insert(key);
  return has(key) ? integer(key) : fallback;
}

bool ConfigNode::boolean(const std::string& key, bool fallback) const {
  used_.insert(key);
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) fail(key, "expected true or false, found " + type_name(v));
  return v.get<bool>();
}

std::string ConfigNode::string(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_string()) fail(key, "expected a string, found " + type_name(v));
  return v.get<std::string>();
}

std::string ConfigNode::string(const std::string& key, const std::string& fallback) const {
  used_.insert(key);
  return has(key) ? string(key) : fallback;
}

std::vector<double> ConfigNode::numbers(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of numbers, found " + type_name(v));
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<double> ConfigNode::numbers(const std::string& key, std::vector<double> fallback) const {
  used_.insert(key);
  return has(key) ? numbers(key) : fallback;
}

ConfigNode ConfigNode::child(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_object()) fail(key, "expected an object, found " + type_name(v));
  return ConfigNode(v, join(key), lines_);
}

std::vector<ConfigNode> ConfigNode::children(const std::string& key) const {
  const json& v = at(key);
  if (!v.is_array()) fail(key, "expected an array of objects, found " + type_name(v));
  std::vector<ConfigNode> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = join(key) + "[" + std::to_string(i) + "]";
    if (!v[i].is_object()) {
      throw ConfigError(lines_->origin(), lines_->line(p), p, "expected an object, found " + type_name(v[i]));
    }
    out.emplace_back(v[i], p, lines_);
  }
  return out;
}

void ConfigNode::finish() const {
  for (const auto& [k, v] : j_->items()) {
    if (!used_.count(k)) fail(k, "unknown field");
  }
}

ConfigNode ExperimentConfig::params_node() const { return ConfigNode(params, "params", lines); }

std::string_view to_string(DataKind k) {
  switch (k) {
    case DataKind::zero: return "zero";
    case DataKind::soliton: return "soliton";
    case DataKind::gaussian: return "gaussian";
    case DataKind::smoothed_box: return "smoothed_box";
    case DataKind::soliton_plus_bump: return "soliton_plus_bump";
    case DataKind::frac_exp_tail: return "frac_exp_tail";
    case DataKind::samples_file: return "samples_file";
  }
  return "unknown";
}

json to_json(const WeightSpec& w) {
  json j;
  j["kind"] = std::string(to_string(w.kind));
  j["a0"] = w.a0;
  j["beta"] = w.beta;
  j["alpha"] = w.alpha;
  j["airy_c"] = w.airy_c;
  j["N"] = w.N;
  j["scheduled"] = w.scheduled;
  j["direction"] = w.direction == TimeDirection::forward ? "forward" : "backward";
  return j;
}

WeightSpec weight_from_node(const ConfigNode& node) {
  WeightSpec w;
  try {
    w.kind = weight_kind_from_string(node.string("kind"));
  } catch (const std::invalid_argument& e) {
    node.fail("kind", e.what());
  }
  w.a0 = node.number("a0", w.a0);
  w.beta = node.number("beta", w.beta);
  w.alpha = node.number("alpha", w.alpha);
  w.airy_c = node.number("airy_c", w.airy_c);
  w.N = node.integer("N", w.N);
  w.scheduled = node.boolean("scheduled", w.scheduled);
  const std::string dir = node.string("direction", "forward");
  if (dir != "forward" && dir != "backward") node.fail("direction", "expected \"forward\" or \"backward\"");
  w.direction = dir == "forward" ? TimeDirection::forward : TimeDirection::backward;
  node.finish();
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    node.fail("", e.what());
  }
  return w;
}

InitialData initial_data_from_node(const ConfigNode& n) {
  InitialData d;
  const std::string type = n.string("type");
  d.jitter = n.number("jitter", 0.0);
  n.require(d.jitter >= 0.0, "jitter", "must be >= 0");
  auto soliton_spec = [](const ConfigNode& s) {
    SolitonSpec sp;
    sp.k = s.integer("k", 1);
    sp.c = s.number("c", 1.0);
    sp.x0 = s.number("x0", 0.0);
    s.finish();
    try {
      sp.validate();
    } catch (const std::invalid_argument& e) {
      s.fail("", e.what());
    }
    return sp;
  };
  if (type == "zero") {
    d.kind = DataKind::zero;
  } else if (type == "soliton") {
    d.kind = DataKind::soliton;
    d.soliton = soliton_spec(n.child("soliton"));
  } else if (type == "gaussian") {
    d.kind = DataKind::gaussian;
    d.amplitude = n.number("amplitude", 1.0);
    d.center = n.number("center", 0.0);
    d.width = n.number("width");
    n.require(d.width > 0.0, "width", "must be > 0");
  } else if (type == "smoothed_box") {
    d.kind = DataKind::smoothed_box;
    d.amplitude = n.number("amplitude", 1.0);
    const auto edges = n.numbers("edges");
    n.require(edges.size() == 2 && edges[0] < edges[1], "edges", "expected [left, right] with left < right");
    d.left_edge = edges[0];
    d.right_edge = edges[1];
    d.smoothing = n.number("smoothing");
    n.require(d.smoothing > 0.0, "smoothing", "must be > 0");
  } else if (type == "soliton_plus_bump") {
    d.kind = DataKind::soliton_plus_bump;
    d.soliton = soliton_spec(n.child("soliton"));
    const ConfigNode b = n.child("bump");
    d.bump_center = b.number("center");
    d.bump_radius = b.number("radius");
    d.bump_amplitude = b.number("amplitude");
    b.require(d.bump_radius > 0.0, "radius", "must be > 0");
    b.finish();
  } else if (type == "frac_exp_tail") {
    d.kind = DataKind::frac_exp_tail;
    d.amplitude = n.number("amplitude", 1.0);
    d.a0 = n.number("a0");
    n.require(d.a0 > 0.0, "a0", "must be > 0");
  } else if (type == "samples_file") {
    d.kind = DataKind::samples_file;
    d.file = n.string("path");
  } else {
    n.fail("type", "unknown initial data type \"" + type +
                       "\" (expected zero, soliton, gaussian, smoothed_box, soliton_plus_bump, "
                       "frac_exp_tail or samples_file)");
  }
  n.finish();
  return d;
}

Field make_initial_data(const InitialData& d, const Grid& grid, std::uint64_t seed) {
  double shift = 0.0;
  if (d.jitter > 0.0) {
    std::mt19937_64 rng(seed);
    shift = std::uniform_real_distribution<double>(-d.jitter, d.jitter)(rng);
  }
  switch (d.kind) {
    case DataKind::zero: return Field::zeros(grid);
    case DataKind::soliton: {
      SolitonSpec s = d.soliton;
      s.x0 += shift;
      return sample_soliton(s, grid);
    }
    case DataKind::gaussian:
      return sample([&](double x) { const double y = (x - d.center - shift) / d.width; return d.amplitude * std::exp(-y * y); },
                    grid);
    case DataKind::smoothed_box:
      return sample(
          [&](double x) {
            const double y = x - shift;
            return 0.5 * d.amplitude *
                   (std::tanh((y - d.left_edge) / d.smoothing) - std::tanh((y - d.right_edge) / d.smoothing));
          },
          grid);
    case DataKind::soliton_plus_bump: {
      SolitonSpec s = d.soliton;
      s.x0 += shift;
      return sample(
          [&](double x) {
            const double y = (x - d.bump_center - shift) / d.bump_radius;
            const double v = std::abs(y) < 1.0 ? std::exp(-1.0 / (1.0 - y * y)) : 0.0;
            return soliton(s, x, 0.0) + d.bump_amplitude * v;
          },
          grid);
    }
    case DataKind::frac_exp_tail:
      return sample(
          [&](double x) {
            const double y = x - shift;
            return d.amplitude * std::exp(-d.a0 * std::pow(1.0 + y * y, 0.75));
          },
          grid);
    case DataKind::samples_file: {
      std::ifstream in(d.file);
      if (!in) throw std::runtime_error("cannot open samples file " + d.file.string());
      std::vector<double> v{std::istream_iterator<double>(in), std::istream_iterator<double>()};
      if (static_cast<int>(v.size()) != grid.size()) {
        throw std::runtime_error("samples file " + d.file.string() + " holds " + std::to_string(v.size()) +
                                 " values, grid has " + std::to_string(grid.size()));
      }
      Field f(grid, Eigen::Map<Eigen::ArrayXd>(v.data(), grid.size()));
      if (!f.all_finite()) throw std::runtime_error("samples file " + d.file.string() + " has non-finite values");
      return f;
    }
  }
  throw std::logic_error("unhandled initial data kind");
}

ExperimentConfig parse_config(std::string_view text, const std::string& origin) {
  ParsedDocument doc = parse_document(text, origin);
  auto lines = std::make_shared<const LineIndex>(doc.lines);
  ExperimentConfig cfg;
  cfg.lines = lines;
  cfg.source = doc.value;
  const ConfigNode root(cfg.source, "", lines);

  cfg.experiment = root.string("experiment");
  cfg.run_id = root.string("run_id", cfg.experiment);
  root.require(!cfg.run_id.empty() && cfg.run_id.find_first_of("/\\") == std::string::npos, "run_id",
               "must be a non-empty name without path separators");
  cfg.output_dir = root.string("output_dir", "runs/" + cfg.run_id);
  if (root.has("seed")) {
    const json& seed = root.raw("seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
      root.fail("seed", "expected a nonnegative integer");
    cfg.seed = seed.get<std::uint64_t>();
  }

  {
    const ConfigNode g = root.child("grid");
    const double L = g.number("half_width_L");
    const int n = g.integer("n_points");
    g.require(L > 0.0, "half_width_L", "must be > 0");
    g.require(n >= 16 && is_power_of_two(n), "n_points", "must be a power of two >= 16");
    g.finish();
    cfg.grid = Grid(L, n);
  }
  if (root.has("solver")) {
    cfg.has_solver = true;
    const ConfigNode s = root.child("solver");
    cfg.solver.k = s.integer("k", 1);
    s.require(cfg.solver.k >= 1, "k", "must be an integer >= 1");
    if (s.has("dt") && cfg.source["solver"]["dt"].is_string()) {
      s.require(s.string("dt") == "auto", "dt", "expected a positive number or \"auto\"");
      cfg.auto_dt = true;
    } else if (s.has("dt")) {
      cfg.solver.dt = s.number("dt");
      s.require(cfg.solver.dt > 0.0, "dt", "must be > 0");
    } else {
      cfg.auto_dt = true;
    }
    cfg.solver.dealias = s.boolean("dealias", true);
    cfg.solver.nonlinear = s.boolean("nonlinear", true);
    cfg.final_time = s.number("final_time_T");
    s.require(cfg.final_time > 0.0, "final_time_T", "must be > 0");
    cfg.snapshot_interval = s.number("snapshot_interval", cfg.final_time / 10.0);
    s.require(cfg.snapshot_interval > 0.0 && cfg.snapshot_interval <= cfg.final_time, "snapshot_interval",
              "must lie in (0, final_time_T]");
    cfg.solver.conservation_check_interval = s.integer("conservation_check_interval", 0);
    s.require(cfg.solver.conservation_check_interval >= 0, "conservation_check_interval", "must be >= 0");
    if (s.has("sponge")) {
      const ConfigNode sp = s.child("sponge");
      SpongeConfig c;
      c.width = sp.number("width");
      c.strength = sp.number("strength");
      sp.require(c.width > 0.0 && c.width < cfg.grid.half_width() / 4.0, "width",
                 "must lie in (0, half_width_L / 4)");
      sp.require(c.strength >= 0.0, "strength", "must be >= 0");
      sp.finish();
      cfg.solver.sponge = c;
    }
    s.finish();
  }
  if (root.has("initial_data")) {
    cfg.has_initial = true;
    cfg.initial = initial_data_from_node(root.child("initial_data"));
  }
  if (root.has("weights")) {
    for (const ConfigNode& w : root.children("weights")) cfg.weights.push_back(weight_from_node(w));
  }
  if (root.has("params")) {
    root.child("params");
    cfg.params = root.raw("params");
  }
  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError(file.string(), 0, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.string());
}

std::uint64_t config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gkdv
