#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "saddlegkb/error.hpp"
#include "saddlegkb/io.hpp"
#include "text.hpp"

namespace saddlegkb {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

std::string_view unquote(std::string_view v) {
  v = text::trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

template <class T>
T need(std::optional<T> v, std::size_t line, std::string_view key, std::string_view value) {
  if (!v) throw ParseError(line, "bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
  return *v;
}

}  // namespace

EtaSetting parse_eta_setting(std::string_view t) {
  t = text::trim(t);
  if (t == "wnorm" || t == "wnorm-over-gamma" || t == "golub-greiff") {
    return {parse_eta_mode(t), 0.0};
  }
  const auto v = text::parse_double(t);
  if (!v || !std::isfinite(*v) || *v < 0.0) {
    throw Error(ErrorCode::InvalidConfig,
                "eta must be wnorm, wnorm-over-gamma, golub-greiff or a value >= 0, got '" + std::string(t) + "'");
  }
  return {std::nullopt, *v};
}

std::string to_string(const EtaSetting& eta) {
  if (eta.mode) return std::string(to_string(*eta.mode));
  return text::format_shortest(eta.value);
}

void RunConfig::validate() const {
  const bool any_path = w || a || g || r;
  if (any_path == problem.has_value()) {
    invalid(problem ? "give either input paths or a problem spec, not both"
                    : "no input: give --w/--a (and optionally --g/--r) or a problem spec");
  }
  if (any_path && (!w || !a)) invalid("both W and A paths are required");
  if (eta.mode == EtaMode::Explicit) invalid("explicit eta needs a value");
  if (!eta.mode && (!(eta.value >= 0.0) || !std::isfinite(eta.value))) invalid("eta must be >= 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) invalid("gamma must be > 0");
  if (threads == 0) invalid("threads must be >= 1");
  gkb_config().validate();
}

GkbConfig RunConfig::gkb_config() const {
  GkbConfig c;
  c.tau = tau;
  c.delay = delay;
  c.maxit = maxit;
  c.bound_mode = bound;
  c.sigma_lower_bound = sigma_lb;
  c.radau_formula = radau;
  c.reorthogonalize = reorthogonalize;
  return c;
}

std::filesystem::path RunConfig::output_directory() const {
  return out_dir ? *out_dir : default_output_directory();
}

std::filesystem::path default_output_directory() {
  if (const char* env = std::getenv("SADDLEGKB_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return ".";
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig c;
  std::set<std::string, std::less<>> seen;
  std::string problem_text;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const auto key = text::trim(line.substr(0, eq));
    const auto value = unquote(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
    }
    try {
      if (key == "w") {
        c.w = std::filesystem::path(std::string(value));
      } else if (key == "a") {
        c.a = std::filesystem::path(std::string(value));
      } else if (key == "g") {
        c.g = std::filesystem::path(std::string(value));
      } else if (key == "r") {
        c.r = std::filesystem::path(std::string(value));
      } else if (is_problem_spec_key(key)) {
        problem_text.append(key).append("=").append(value).append("\n");
      } else if (key == "eta") {
        c.eta = parse_eta_setting(value);
      } else if (key == "gamma") {
        c.gamma = need(text::parse_double(value), line_no, key, value);
      } else if (key == "tau") {
        c.tau = need(text::parse_double(value), line_no, key, value);
      } else if (key == "delay") {
        c.delay = need(text::parse_int(value), line_no, key, value);
      } else if (key == "maxit") {
        c.maxit = need(text::parse_int(value), line_no, key, value);
      } else if (key == "bound") {
        c.bound = parse_bound_mode(value);
      } else if (key == "sigma_lb") {
        c.sigma_lb = need(text::parse_double(value), line_no, key, value);
      } else if (key == "radau") {
        c.radau = parse_radau_formula(value);
      } else if (key == "reorthogonalize") {
        c.reorthogonalize = need(text::parse_bool(value), line_no, key, value);
      } else if (key == "out_dir") {
        c.out_dir = std::filesystem::path(std::string(value));
      } else if (key == "format") {
        c.format = parse_history_format(value);
      } else if (key == "threads") {
        c.threads = need(text::parse_int(value), line_no, key, value);
      } else {
        throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!problem_text.empty()) c.problem = parse_problem_spec(problem_text);
  return c;
}

RunConfig read_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.reason(), path.string());
  }
}

std::string serialize(const RunConfig& c) {
  std::string out;
  auto line = [&out](std::string_view k, const std::string& v) {
    out.append(k).append(" = ").append(v).append("\n");
  };
  auto quoted = [](const std::filesystem::path& p) { return "\"" + p.string() + "\""; };
  if (c.w) line("w", quoted(*c.w));
  if (c.a) line("a", quoted(*c.a));
  if (c.g) line("g", quoted(*c.g));
  if (c.r) line("r", quoted(*c.r));
  if (c.problem) {
    const auto spec = serialize(*c.problem);
    std::size_t pos = 0;
    while (pos < spec.size()) {
      const auto end = spec.find('\n', pos);
      const auto item = std::string_view(spec).substr(pos, end - pos);
      const auto eq = item.find('=');
      line(item.substr(0, eq), std::string(item.substr(eq + 1)));
      pos = end + 1;
    }
  }
  line("eta", to_string(c.eta));
  line("gamma", text::format_shortest(c.gamma));
  line("tau", text::format_shortest(c.tau));
  line("delay", std::to_string(c.delay));
  line("maxit", std::to_string(c.maxit));
  line("bound", std::string(to_string(c.bound)));
  if (c.sigma_lb) line("sigma_lb", text::format_shortest(*c.sigma_lb));
  line("radau", std::string(to_string(c.radau)));
  line("reorthogonalize", c.reorthogonalize ? "true" : "false");
  if (c.out_dir) line("out_dir", quoted(*c.out_dir));
  line("format", std::string(to_string(c.format)));
  line("threads", std::to_string(c.threads));
  return out;
}

SaddleSystem load_system(const RunConfig& c) {
  if (c.problem) return generate(*c.problem);
  if (!c.w || !c.a) invalid("both W and A paths are required");
  auto w = read_symmetric_matrix(*c.w);
  auto a = read_general_matrix(*c.a);
  Vector g = c.g ? read_vector(*c.g) : Vector(w.size());
  Vector r = c.r ? read_vector(*c.r) : Vector(a.ncols());
  return make_saddle_system(std::move(w), std::move(a), std::move(g), std::move(r));
}

}  // namespace saddlegkb
