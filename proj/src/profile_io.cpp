#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fractalhand/error.hpp"
#include "fractalhand/profile.hpp"

namespace fractalhand {

std::optional<ProfileFormat> parse_profile_format(std::string_view name) {
  if (name == "csv" || name == "csv_points") return ProfileFormat::csv_points;
  if (name == "json" || name == "json_points") return ProfileFormat::json_points;
  if (name == "svg" || name == "svg_path") return ProfileFormat::svg_path;
  return std::nullopt;
}

std::optional<ProfileFormat> format_from_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".csv") return ProfileFormat::csv_points;
  if (ext == ".json") return ProfileFormat::json_points;
  if (ext == ".svg") return ProfileFormat::svg_path;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Profile parse_csv_points(std::string_view text) {
  std::vector<Vec2> pts;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const std::size_t comma = line.find(',');
    const auto x = comma == std::string_view::npos ? std::nullopt : to_double(line.substr(0, comma));
    const auto y = comma == std::string_view::npos ? std::nullopt : to_double(line.substr(comma + 1));
    if (!x || !y) {
      if (!seen_data && pts.empty() && line_no == 1) continue;  // header row
      throw IngestError(IngestErrorKind::malformed,
                        "line " + std::to_string(line_no) + ": expected \"x,y\"");
    }
    seen_data = true;
    pts.push_back({*x, *y});
  }
  if (pts.empty()) throw IngestError(IngestErrorKind::malformed, "no points");
  return Profile::from_points(std::move(pts));
}

Profile parse_json_points(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IngestError(IngestErrorKind::malformed, e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw IngestError(IngestErrorKind::malformed, "expected an object with a \"points\" array");
  }
  if (doc.contains("units")) {
    const auto& u = doc["units"];
    if (!u.is_string() || (u != "mm" && u != "m" && u != "unitless")) {
      throw IngestError(IngestErrorKind::malformed, "units must be \"mm\", \"m\" or \"unitless\"");
    }
  }
  if (doc.contains("closed") && doc["closed"] == false) {
    throw IngestError(IngestErrorKind::open_curve, "points describe an open curve");
  }
  std::vector<Vec2> pts;
  for (const auto& p : doc["points"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw IngestError(IngestErrorKind::malformed, "each point must be [x, y]");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return Profile::from_points(std::move(pts));
}

// ---------------------------------------------------------------------------
// SVG path data

namespace {

struct PathSegment {
  enum class Kind { line, quad, cubic } kind;
  Vec2 p[4];  // line: p0,p1; quad: p0,c,p1; cubic: p0,c0,c1,p1
};

struct RawSubpath {
  std::vector<PathSegment> segments;
  Vec2 start;
  bool closed = false;
};

class PathLexer {
 public:
  explicit PathLexer(std::string_view d) : d_(d) {}

  void skip_separators() {
    while (pos_ < d_.size() &&
           (std::isspace(static_cast<unsigned char>(d_[pos_])) || d_[pos_] == ',')) {
      ++pos_;
    }
  }

  bool at_end() {
    skip_separators();
    return pos_ >= d_.size();
  }

  bool next_is_command() {
    skip_separators();
    return pos_ < d_.size() && std::isalpha(static_cast<unsigned char>(d_[pos_])) &&
           d_[pos_] != 'e' && d_[pos_] != 'E';
  }

  char command() { return d_[pos_++]; }

  bool next_is_number() {
    skip_separators();
    if (pos_ >= d_.size()) return false;
    const char c = d_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  double number() {
    skip_separators();
    std::size_t end = pos_;
    if (end < d_.size() && (d_[end] == '-' || d_[end] == '+')) ++end;
    bool dot = false;
    while (end < d_.size() &&
           (std::isdigit(static_cast<unsigned char>(d_[end])) || (d_[end] == '.' && !dot))) {
      dot = dot || d_[end] == '.';
      ++end;
    }
    if (end < d_.size() && (d_[end] == 'e' || d_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < d_.size() && (d_[e] == '-' || d_[e] == '+')) ++e;
      if (e < d_.size() && std::isdigit(static_cast<unsigned char>(d_[e]))) {
        end = e;
        while (end < d_.size() && std::isdigit(static_cast<unsigned char>(d_[end]))) ++end;
      }
    }
    const auto v = to_double(d_.substr(pos_, end - pos_));
    if (!v) {
      throw IngestError(IngestErrorKind::malformed,
                        "bad number in path data at offset " + std::to_string(pos_));
    }
    pos_ = end;
    return *v;
  }

  bool flag() {
    skip_separators();
    if (pos_ < d_.size() && (d_[pos_] == '0' || d_[pos_] == '1')) return d_[pos_++] == '1';
    throw IngestError(IngestErrorKind::malformed, "bad arc flag in path data");
  }

 private:
  std::string_view d_;
  std::size_t pos_ = 0;
};

// Endpoint-parametrized elliptical arc to cubic Beziers (quarter turns or less).
void append_arc(RawSubpath& sub, Vec2 p0, double rx, double ry, double x_rot_deg, bool large,
                bool sweep, Vec2 p1) {
  if (p0 == p1) return;
  rx = std::abs(rx);
  ry = std::abs(ry);
  if (rx == 0.0 || ry == 0.0) {
    sub.segments.push_back({PathSegment::Kind::line, {p0, p1}});
    return;
  }
  const double phi = x_rot_deg * std::numbers::pi / 180.0;
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const Vec2 h = (p0 - p1) / 2.0;
  const Vec2 q{cphi * h.x + sphi * h.y, -sphi * h.x + cphi * h.y};
  const double lambda = (q.x * q.x) / (rx * rx) + (q.y * q.y) / (ry * ry);
  if (lambda > 1.0) {
    rx *= std::sqrt(lambda);
    ry *= std::sqrt(lambda);
  }
  const double num = rx * rx * ry * ry - rx * rx * q.y * q.y - ry * ry * q.x * q.x;
  const double den = rx * rx * q.y * q.y + ry * ry * q.x * q.x;
  double coef = std::sqrt(std::max(0.0, num / den));
  if (large == sweep) coef = -coef;
  const Vec2 cq{coef * rx * q.y / ry, -coef * ry * q.x / rx};
  const Vec2 mid = (p0 + p1) / 2.0;
  const Vec2 center{cphi * cq.x - sphi * cq.y + mid.x, sphi * cq.x + cphi * cq.y + mid.y};

  auto angle = [](Vec2 u, Vec2 v) { return std::atan2(cross(u, v), dot(u, v)); };
  const Vec2 u{(q.x - cq.x) / rx, (q.y - cq.y) / ry};
  const Vec2 v{(-q.x - cq.x) / rx, (-q.y - cq.y) / ry};
  const double theta1 = angle({1.0, 0.0}, u);
  double dtheta = angle(u, v);
  if (!sweep && dtheta > 0.0) dtheta -= kTwoPi;
  if (sweep && dtheta < 0.0) dtheta += kTwoPi;

  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(dtheta) / (std::numbers::pi / 2.0))));
  const double step = dtheta / pieces;
  const double k = 4.0 / 3.0 * std::tan(step / 4.0);
  auto on_ellipse = [&](double t) {
    const double x = rx * std::cos(t), y = ry * std::sin(t);
    return Vec2{cphi * x - sphi * y + center.x, sphi * x + cphi * y + center.y};
  };
  auto derivative = [&](double t) {
    const double x = -rx * std::sin(t), y = ry * std::cos(t);
    return Vec2{cphi * x - sphi * y, sphi * x + cphi * y};
  };
  Vec2 a = p0;
  for (int i = 0; i < pieces; ++i) {
    const double t0 = theta1 + i * step;
    const double t1 = t0 + step;
    const Vec2 b = i + 1 == pieces ? p1 : on_ellipse(t1);
    sub.segments.push_back(
        {PathSegment::Kind::cubic, {a, a + k * derivative(t0), b - k * derivative(t1), b}});
    a = b;
  }
}

std::vector<RawSubpath> parse_path_data(std::string_view d) {
  PathLexer lex(d);
  std::vector<RawSubpath> subs;
  Vec2 cur, start, last_ctrl;
  char prev_cmd = 0;
  char cmd = 0;

  while (!lex.at_end()) {
    if (lex.next_is_command()) {
      cmd = lex.command();
    } else if (cmd == 0) {
      throw IngestError(IngestErrorKind::malformed, "path data must start with a command");
    }
    const bool rel = std::islower(static_cast<unsigned char>(cmd));
    const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(cmd)));
    auto pt = [&]() {
      const double x = lex.number();
      const double y = lex.number();
      return rel ? Vec2{cur.x + x, cur.y + y} : Vec2{x, y};
    };
    auto need_sub = [&]() -> RawSubpath& {
      if (subs.empty()) throw IngestError(IngestErrorKind::malformed, "drawing before moveto");
      return subs.back();
    };

    switch (up) {
      case 'M': {
        cur = pt();
        start = cur;
        subs.push_back({{}, cur, false});
        // Subsequent pairs are implicit linetos.
        cmd = rel ? 'l' : 'L';
        prev_cmd = 'M';
        continue;
      }
      case 'Z':
        need_sub().closed = true;
        cur = start;
        prev_cmd = 'Z';
        cmd = 0;
        continue;
      case 'L': {
        const Vec2 p = pt();
        need_sub().segments.push_back({PathSegment::Kind::line, {cur, p}});
        cur = p;
        break;
      }
      case 'H': {
        const double x = lex.number();
        const Vec2 p{rel ? cur.x + x : x, cur.y};
        need_sub().segments.push_back({PathSegment::Kind::line, {cur, p}});
        cur = p;
        break;
      }
      case 'V': {
        const double y = lex.number();
        const Vec2 p{cur.x, rel ? cur.y + y : y};
        need_sub().segments.push_back({PathSegment::Kind::line, {cur, p}});
        cur = p;
        break;
      }
      case 'C': {
        const Vec2 c0 = pt(), c1 = pt(), p = pt();
        need_sub().segments.push_back({PathSegment::Kind::cubic, {cur, c0, c1, p}});
        last_ctrl = c1;
        cur = p;
        break;
      }
      case 'S': {
        const bool smooth = prev_cmd == 'C' || prev_cmd == 'S';
        const Vec2 c0 = smooth ? 2.0 * cur - last_ctrl : cur;
        const Vec2 c1 = pt(), p = pt();
        need_sub().segments.push_back({PathSegment::Kind::cubic, {cur, c0, c1, p}});
        last_ctrl = c1;
        cur = p;
        break;
      }
      case 'Q': {
        const Vec2 c = pt(), p = pt();
        need_sub().segments.push_back({PathSegment::Kind::quad, {cur, c, p}});
        last_ctrl = c;
        cur = p;
        break;
      }
      case 'T': {
        const bool smooth = prev_cmd == 'Q' || prev_cmd == 'T';
        const Vec2 c = smooth ? 2.0 * cur - last_ctrl : cur;
        const Vec2 p = pt();
        need_sub().segments.push_back({PathSegment::Kind::quad, {cur, c, p}});
        last_ctrl = c;
        cur = p;
        break;
      }
      case 'A': {
        const double rx = lex.number(), ry = lex.number(), rot = lex.number();
        const bool large = lex.flag();
        const bool sweep = lex.flag();
        const Vec2 p = pt();
        append_arc(need_sub(), cur, rx, ry, rot, large, sweep, p);
        cur = p;
        break;
      }
      default:
        throw IngestError(IngestErrorKind::malformed,
                          std::string("unsupported path command '") + cmd + "'");
    }
    prev_cmd = up;
    if (!lex.at_end() && !lex.next_is_command() && !lex.next_is_number()) {
      throw IngestError(IngestErrorKind::malformed, "unexpected character in path data");
    }
  }
  return subs;
}

void flatten_cubic(Vec2 p0, Vec2 c0, Vec2 c1, Vec2 p1, double tol, int depth,
                   std::vector<Vec2>& out) {
  const Vec2 chord = p1 - p0;
  const double len = norm(chord);
  double dev;
  if (len > 0.0) {
    dev = std::max(std::abs(cross(chord, c0 - p0)), std::abs(cross(chord, c1 - p0))) / len;
  } else {
    dev = std::max(distance(p0, c0), distance(p0, c1));
  }
  if (dev <= tol || depth >= 24) {
    out.push_back(p1);
    return;
  }
  const Vec2 a = (p0 + c0) / 2.0, b = (c0 + c1) / 2.0, c = (c1 + p1) / 2.0;
  const Vec2 ab = (a + b) / 2.0, bc = (b + c) / 2.0;
  const Vec2 m = (ab + bc) / 2.0;
  flatten_cubic(p0, a, ab, m, tol, depth + 1, out);
  flatten_cubic(m, bc, c, p1, tol, depth + 1, out);
}

}  // namespace

std::vector<FlattenedSubpath> flatten_svg_path_data(std::string_view d,
                                                    const SvgFlattenOptions& options) {
  const std::vector<RawSubpath> subs = parse_path_data(d);

  std::vector<Vec2> controls;
  for (const auto& sub : subs) {
    controls.push_back(sub.start);
    for (const auto& seg : sub.segments) {
      const int count = seg.kind == PathSegment::Kind::line ? 2 : seg.kind == PathSegment::Kind::quad ? 3 : 4;
      controls.insert(controls.end(), seg.p, seg.p + count);
    }
  }
  const double diag = controls.empty() ? 0.0 : bounding_box(controls).diagonal();
  const double tol = options.relative_chord_tolerance * diag;

  std::vector<FlattenedSubpath> out;
  for (const auto& sub : subs) {
    FlattenedSubpath flat;
    flat.points.push_back(sub.start);
    for (const auto& seg : sub.segments) {
      switch (seg.kind) {
        case PathSegment::Kind::line:
          flat.points.push_back(seg.p[1]);
          break;
        case PathSegment::Kind::quad: {
          const Vec2 c0 = seg.p[0] + (2.0 / 3.0) * (seg.p[1] - seg.p[0]);
          const Vec2 c1 = seg.p[2] + (2.0 / 3.0) * (seg.p[1] - seg.p[2]);
          flatten_cubic(seg.p[0], c0, c1, seg.p[2], tol, 0, flat.points);
          break;
        }
        case PathSegment::Kind::cubic:
          flatten_cubic(seg.p[0], seg.p[1], seg.p[2], seg.p[3], tol, 0, flat.points);
          break;
      }
    }
    flat.closed = sub.closed || (flat.points.size() > 2 && flat.points.front() == flat.points.back());
    out.push_back(std::move(flat));
  }
  return out;
}

Profile parse_svg_path(std::string_view text, const SvgFlattenOptions& options) {
  const std::size_t tag = text.find("<path");
  if (tag == std::string_view::npos) {
    throw IngestError(IngestErrorKind::malformed, "no <path> element");
  }
  const std::size_t tag_end = text.find('>', tag);
  const std::string_view element =
      text.substr(tag, tag_end == std::string_view::npos ? std::string_view::npos : tag_end - tag);

  // Find a standalone d attribute (not the tail of e.g. "id=").
  std::size_t at = 0;
  std::string_view value;
  while ((at = element.find("d", at)) != std::string_view::npos) {
    const bool boundary = at > 0 && std::isspace(static_cast<unsigned char>(element[at - 1]));
    std::size_t k = at + 1;
    while (k < element.size() && std::isspace(static_cast<unsigned char>(element[k]))) ++k;
    if (boundary && k < element.size() && element[k] == '=') {
      ++k;
      while (k < element.size() && std::isspace(static_cast<unsigned char>(element[k]))) ++k;
      if (k < element.size() && (element[k] == '"' || element[k] == '\'')) {
        const char quote = element[k];
        const std::size_t close = element.find(quote, k + 1);
        if (close == std::string_view::npos) break;
        value = element.substr(k + 1, close - k - 1);
        break;
      }
    }
    ++at;
  }
  if (value.empty()) throw IngestError(IngestErrorKind::malformed, "<path> has no d attribute");

  std::vector<FlattenedSubpath> subs = flatten_svg_path_data(value, options);
  if (subs.empty()) throw IngestError(IngestErrorKind::malformed, "empty path data");
  if (!subs.front().closed) {
    throw IngestError(IngestErrorKind::open_curve, "first subpath is not closed");
  }
  return Profile::from_points(std::move(subs.front().points));
}

Profile load_profile(const std::filesystem::path& path, ProfileFormat format,
                     const SvgFlattenOptions& svg) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError(IngestErrorKind::io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  switch (format) {
    case ProfileFormat::csv_points: return parse_csv_points(text);
    case ProfileFormat::json_points: return parse_json_points(text);
    case ProfileFormat::svg_path: return parse_svg_path(text, svg);
  }
  throw IngestError(IngestErrorKind::malformed, "unknown format");
}

}  // namespace fractalhand
