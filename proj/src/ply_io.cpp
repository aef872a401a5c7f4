#include "galms/ply_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "galms/errors.hpp"

namespace galms {

namespace {

// Line-oriented cursor over the input text, tracking 1-based line numbers
// and tolerating CRLF input.
struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  bool next(std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;
    return true;
  }
};

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_double_token(std::string_view tok, std::size_t line_no, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw parse_error(std::string("expected a number for ") + what + ", got '" + std::string(tok) + "'", line_no);
  return value;
}

std::int64_t parse_int_token(std::string_view tok, std::size_t line_no, const char* what) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw parse_error(std::string("expected an integer for ") + what + ", got '" + std::string(tok) + "'", line_no);
  return value;
}

bool is_scalar_type(std::string_view t) {
  return t == "float" || t == "float32" || t == "double" || t == "float64" || t == "char" ||
         t == "uchar" || t == "int8" || t == "uint8" || t == "short" || t == "ushort" ||
         t == "int16" || t == "uint16" || t == "int" || t == "uint" || t == "int32" ||
         t == "uint32";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open file for writing", path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw io_error("write failed", path.string());
}

void append_shortest(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

PointCloud parse_ply_ascii(std::string_view text) {
  LineReader reader{text};
  std::string_view line;

  if (!reader.next(line) || line != "ply") throw parse_error("missing 'ply' magic", 1);

  bool have_format = false;
  std::int64_t vertex_count = -1;
  bool in_vertex_element = false;
  int col_x = -1, col_y = -1, col_z = -1;
  int vertex_columns = 0;
  bool header_done = false;

  while (!header_done) {
    if (!reader.next(line)) throw parse_error("unexpected end of file inside header", reader.line_no);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;

    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii")
        throw parse_error("unsupported format '" + std::string(tok.size() > 1 ? tok[1] : "") +
                              "': only ascii 1.0 is supported",
                          reader.line_no);
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw parse_error("malformed element declaration", reader.line_no);
      if (tok[1] == "vertex") {
        if (vertex_count >= 0) throw parse_error("duplicate vertex element", reader.line_no);
        vertex_count = parse_int_token(tok[2], reader.line_no, "vertex count");
        if (vertex_count < 0) throw parse_error("negative vertex count", reader.line_no);
        in_vertex_element = true;
      } else {
        if (vertex_count < 0)
          throw parse_error("element '" + std::string(tok[1]) + "' precedes the vertex element", reader.line_no);
        in_vertex_element = false;
      }
    } else if (tok[0] == "property") {
      if (!in_vertex_element) continue;  // properties of trailing elements are ignored
      if (tok.size() >= 2 && tok[1] == "list")
        throw parse_error("list properties in the vertex element are not supported", reader.line_no);
      if (tok.size() != 3 || !is_scalar_type(tok[1]))
        throw parse_error("malformed vertex property", reader.line_no);
      const bool fp = tok[1] == "float" || tok[1] == "float32" || tok[1] == "double" || tok[1] == "float64";
      if (tok[2] == "x") {
        if (!fp) throw parse_error("property x must be float or double", reader.line_no);
        col_x = vertex_columns;
      } else if (tok[2] == "y") {
        if (!fp) throw parse_error("property y must be float or double", reader.line_no);
        col_y = vertex_columns;
      } else if (tok[2] == "z") {
        if (!fp) throw parse_error("property z must be float or double", reader.line_no);
        col_z = vertex_columns;
      }
      ++vertex_columns;
    } else if (tok[0] == "end_header") {
      header_done = true;
    } else {
      throw parse_error("unrecognized header line '" + std::string(tok[0]) + "'", reader.line_no);
    }
  }
  if (!have_format) throw parse_error("header is missing the format declaration", reader.line_no);
  if (vertex_count < 0) throw parse_error("header is missing the vertex element", reader.line_no);
  if (col_x < 0 || col_y < 0 || col_z < 0)
    throw parse_error("vertex element is missing x, y or z properties", reader.line_no);

  PointCloud cloud;
  cloud.points.reserve(static_cast<std::size_t>(vertex_count));
  for (std::int64_t n = 0; n < vertex_count; ++n) {
    if (!reader.next(line))
      throw parse_error("expected " + std::to_string(vertex_count) + " vertex rows, file ends after " +
                            std::to_string(n),
                        reader.line_no + 1);
    const auto tok = split_ws(line);
    if (static_cast<int>(tok.size()) != vertex_columns)
      throw parse_error("vertex row has " + std::to_string(tok.size()) + " fields, expected " +
                            std::to_string(vertex_columns),
                        reader.line_no);
    Vec3 p;
    p.x = parse_double_token(tok[static_cast<std::size_t>(col_x)], reader.line_no, "x");
    p.y = parse_double_token(tok[static_cast<std::size_t>(col_y)], reader.line_no, "y");
    p.z = parse_double_token(tok[static_cast<std::size_t>(col_z)], reader.line_no, "z");
    cloud.points.push_back(p);
  }
  return cloud;
}

PointCloud load_ply(const std::filesystem::path& path) {
  PointCloud cloud = parse_ply_ascii(read_file(path));
  cloud.name = path.stem().string();
  return cloud;
}

std::string ply_to_string(const PointCloud& cloud) {
  std::string out;
  out += "ply\n";
  out += "format ascii 1.0\n";
  out += "element vertex " + std::to_string(cloud.points.size()) + "\n";
  out += "property double x\n";
  out += "property double y\n";
  out += "property double z\n";
  out += "end_header\n";
  for (const Vec3& p : cloud.points) {
    append_shortest(out, p.x);
    out += ' ';
    append_shortest(out, p.y);
    out += ' ';
    append_shortest(out, p.z);
    out += '\n';
  }
  return out;
}

void write_ply_ascii(const PointCloud& cloud, const std::filesystem::path& path) {
  write_file(path, ply_to_string(cloud));
}

std::vector<std::pair<std::int64_t, std::int64_t>> parse_correspondences(std::string_view text) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  LineReader reader{text};
  std::string_view line;
  while (reader.next(line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2)
      throw parse_error("expected 'source_index target_index'", reader.line_no);
    const std::int64_t a = parse_int_token(tok[0], reader.line_no, "source index");
    const std::int64_t b = parse_int_token(tok[1], reader.line_no, "target index");
    if (a < 0 || b < 0) throw parse_error("indices must be non-negative", reader.line_no);
    out.emplace_back(a, b);
  }
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> load_correspondences(const std::filesystem::path& path) {
  return parse_correspondences(read_file(path));
}

}  // namespace galms
