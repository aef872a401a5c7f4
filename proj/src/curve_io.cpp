#include "galms/curve_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "galms/errors.hpp"

namespace galms {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  out.append(buf, ptr);
}

void append_value_pair(std::string& out, const std::vector<double>& series, std::size_t i) {
  out += ',';
  if (i < series.size()) {
    append_number(out, series[i]);
    out += ',';
    append_number(out, to_db_clamped(series[i]));
  } else {
    out += ',';
  }
}

}  // namespace

std::string curve_to_csv(const LearningCurve& curve) {
  if (!curve.sq_err.empty() && curve.sq_err.size() != curve.size())
    throw std::invalid_argument("curve_to_csv: sq_err length mismatch");
  if (!curve.cost.empty() && curve.cost.size() != curve.size())
    throw std::invalid_argument("curve_to_csv: cost length mismatch");
  if (!curve.emse.empty() && curve.emse.size() != curve.size())
    throw std::invalid_argument("curve_to_csv: emse length mismatch");

  std::string out = "i,sq_err,sq_err_db,cost,cost_db,emse,emse_db\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += std::to_string(curve.iteration[i]);
    append_value_pair(out, curve.sq_err, i);
    append_value_pair(out, curve.cost, i);
    append_value_pair(out, curve.emse, i);
    out += '\n';
  }
  return out;
}

void write_curve_csv(const LearningCurve& curve, const std::filesystem::path& path) {
  const std::string csv = curve_to_csv(curve);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open file for writing", path.string());
  out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
  if (!out) throw io_error("write failed", path.string());
}

}  // namespace galms
