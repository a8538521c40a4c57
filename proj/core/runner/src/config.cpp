#include "frechet/runner/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "frechet/error.hpp"

namespace frechet::runner {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::kConfig, "expected a number for " + std::string(what) + ", got '" + std::string(text) + "'");
  }
  return v;
}

long parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw Error(ErrorKind::kConfig, "expected an integer for " + std::string(what) + ", got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    out.push_back(parse_double(item, what));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

Config Config::parse(std::string_view text, std::string origin) {
  Config c;
  c.origin_ = std::move(origin);
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::kConfig, c.origin_ + ":" + std::to_string(line_no) + ": unterminated section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      c.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, c.origin_ + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::kConfig, c.origin_ + ":" + std::to_string(line_no) + ": empty key");
    c.sections_[section][std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Config c = parse(ss.str(), path.string());
  c.base_dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  return c;
}

bool Config::has(const std::string& section, const std::string& key) const { return get(section, key).has_value(); }

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return std::nullopt;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return std::nullopt;
  return k->second;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return get(section, key).value_or(fallback);
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  const auto v = get(section, key);
  return v ? parse_double(*v, section + "." + key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
  const auto v = get(section, key);
  return v ? parse_int(*v, section + "." + key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto v = get(section, key);
  return v ? parse_list(*v, section + "." + key) : fallback;
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = std::move(value);
}

GradedSpace space_from_config(const Config& config, const std::string& section, const GradedSpace& fallback) {
  const auto dim_override = config.get(section, "dim");
  const std::size_t dim = dim_override ? static_cast<std::size_t>(parse_int(*dim_override, section + ".dim")) : fallback.dim();
  if (dim == 0) throw Error(ErrorKind::kConfig, section + ".dim must be positive");

  SeminormMode sm = fallback.seminorm_mode();
  if (auto v = config.get(section, "seminorm_mode")) {
    if (*v == "coordinate-abs") {
      sm = SeminormMode::kCoordinateAbs;
    } else if (*v == "cumulative-max") {
      sm = SeminormMode::kCumulativeMax;
    } else {
      throw Error(ErrorKind::kConfig, "unknown seminorm_mode '" + *v + "'");
    }
  }
  MetricMode mm = fallback.metric_mode();
  if (auto v = config.get(section, "metric_mode")) {
    if (*v == "sup-form" || *v == "sup") {
      mm = MetricMode::kSupForm;
    } else if (*v == "sum-form" || *v == "sum") {
      mm = MetricMode::kSumForm;
    } else {
      throw Error(ErrorKind::kConfig, "unknown metric_mode '" + *v + "'");
    }
  }

  std::vector<double> weights;
  std::optional<double> tail;
  if (auto rule = config.get(section, "weight_rule")) {
    if (rule->rfind("geometric:", 0) == 0) {
      const double a = parse_double(rule->substr(10), section + ".weight_rule");
      GradedSpace g = GradedSpace::geometric(dim, a, sm, mm);
      weights = g.weights();
      tail = g.tail_bound();
    } else if (*rule == "dyadic") {
      GradedSpace g = GradedSpace::dyadic(dim, sm, mm);
      weights = g.weights();
      tail = g.tail_bound();
    } else if (rule->rfind("explicit:", 0) == 0) {
      weights = parse_list(rule->substr(9), section + ".weight_rule");
      if (weights.size() != dim && !dim_override) {
        // dim follows the explicit list when not given separately
      } else if (weights.size() != dim) {
        throw Error(ErrorKind::kConfig, "explicit weight list has " + std::to_string(weights.size()) +
                                            " entries but dim = " + std::to_string(dim));
      }
    } else {
      throw Error(ErrorKind::kConfig, "unknown weight_rule '" + *rule + "'");
    }
  } else if (dim == fallback.dim()) {
    weights = fallback.weights();
    tail = fallback.tail_bound();
  } else if (auto r = fallback.geometric_ratio()) {
    GradedSpace g = GradedSpace::geometric(dim, *r, sm, mm);
    weights = g.weights();
    tail = g.tail_bound();
  } else {
    throw Error(ErrorKind::kConfig, section + ".dim changed but the default weights are not geometric; give weight_rule");
  }
  if (auto t = config.get(section, "tail_bound")) tail = parse_double(*t, section + ".tail_bound");
  return GradedSpace(std::move(weights), sm, mm, tail);
}

}  // namespace frechet::runner
