#include "vlcsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

namespace vlc {

namespace {
constexpr double kPi = 3.14159265358979323846;

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
}  // namespace

void OpticalParams::validate() const {
  require(lambda_order > 0.0, "lambda_order must be > 0");
  require(phi_c > 0.0 && phi_c <= kPi / 2.0, "phi_c must be in (0, pi/2]");
  require(gamma >= 1.0, "gamma must be >= 1");
  require(a_pd > 0.0, "a_pd must be > 0");
}

void ChannelGeometry::validate() const {
  require(!led_positions.empty() && !pd_positions.empty(), "need at least one LED and one PD");
  require(led_orientations.size() == led_positions.size(), "led orientation count mismatch");
  require(pd_orientations.size() == pd_positions.size(), "pd orientation count mismatch");
  params.validate();
  for (const auto& o : led_orientations)
    require(std::abs(norm3(o) - 1.0) <= 1e-12, "led orientation must have unit norm");
  for (const auto& o : pd_orientations)
    require(std::abs(norm3(o) - 1.0) <= 1e-12, "pd orientation must have unit norm");
  double plane = 0.0;
  for (const auto& p : pd_positions) plane = std::max(plane, p[2]);
  for (const auto& p : led_positions)
    require(p[2] > plane, "every LED must sit strictly above the receiving plane");
}

double lambertian_radiant_intensity(double phi, double lambda_order) {
  if (!(phi >= 0.0 && phi <= kPi / 2.0)) throw std::domain_error("phi outside [0, pi/2]");
  require(lambda_order > 0.0, "lambda_order must be > 0");
  return (lambda_order + 1.0) / (2.0 * kPi) * std::pow(std::cos(phi), lambda_order);
}

double effective_collection_area(const OpticalParams& p) {
  if (p.phi_c == 0.0) throw std::domain_error("phi_c = 0 has no defined collection area");
  p.validate();
  double s = std::sin(p.phi_c);
  return p.gamma * p.gamma / (s * s) * p.a_pd;
}

double los_dc_gain(std::size_t led_index, std::size_t pd_index, const ChannelGeometry& g) {
  const Vec3& lp = g.led_positions[led_index];
  const Vec3& pp = g.pd_positions[pd_index];
  Vec3 diff = {pp[0] - lp[0], pp[1] - lp[1], pp[2] - lp[2]};
  double d = norm3(diff);
  if (d == 0.0) throw std::domain_error("coincident LED and PD");
  Vec3 led_to_pd = {diff[0] / d, diff[1] / d, diff[2] / d};
  Vec3 pd_to_led = {-led_to_pd[0], -led_to_pd[1], -led_to_pd[2]};

  double cos_emit = dot3(g.led_orientations[led_index], led_to_pd);
  double cos_inc = dot3(g.pd_orientations[pd_index], pd_to_led);
  cos_emit = std::min(1.0, std::max(-1.0, cos_emit));
  cos_inc = std::min(1.0, std::max(-1.0, cos_inc));

  double phi_inc = std::acos(cos_inc);
  if (phi_inc > g.params.phi_c) return 0.0;  // incidence at phi_c exactly still counts
  double phi_emit = std::acos(cos_emit);
  if (phi_emit > kPi / 2.0) return 0.0;  // emission behind the LED plane

  double aq = effective_collection_area(g.params);
  return aq / (d * d) * lambertian_radiant_intensity(phi_emit, g.params.lambda_order) * cos_inc;
}

ChannelMatrix build_channel_matrix(const ChannelGeometry& g) {
  g.validate();
  ChannelMatrix H;
  H.gains = Mat(g.n_rx(), g.n_tx());
  for (std::size_t q = 0; q < g.n_rx(); ++q)
    for (std::size_t p = 0; p < g.n_tx(); ++p) H.gains(q, p) = los_dc_gain(p, q, g);
  return H;
}

ChannelGeometry make_grid_scene(int led_rows, int led_cols, double led_spacing, int pd_rows,
                                int pd_cols, double pd_spacing, double height,
                                const OpticalParams& optics) {
  require(led_rows >= 1 && led_cols >= 1 && pd_rows >= 1 && pd_cols >= 1, "grid dims must be >= 1");
  require(height > 0.0, "height must be > 0");
  ChannelGeometry g;
  g.params = optics;
  double lx0 = -0.5 * led_spacing * (led_cols - 1);
  double ly0 = -0.5 * led_spacing * (led_rows - 1);
  for (int i = 0; i < led_rows; ++i)
    for (int j = 0; j < led_cols; ++j) {
      g.led_positions.push_back({lx0 + j * led_spacing, ly0 + i * led_spacing, height});
      g.led_orientations.push_back({0.0, 0.0, -1.0});
    }
  double px0 = -0.5 * pd_spacing * (pd_cols - 1);
  double py0 = -0.5 * pd_spacing * (pd_rows - 1);
  for (int i = 0; i < pd_rows; ++i)
    for (int j = 0; j < pd_cols; ++j) {
      g.pd_positions.push_back({px0 + j * pd_spacing, py0 + i * pd_spacing, 0.0});
      g.pd_orientations.push_back({0.0, 0.0, 1.0});
    }
  return g;
}

void write_channel_csv(const ChannelMatrix& H, std::ostream& os) {
  os << "# format=1\n";
  os << "pd_index";
  for (std::size_t p = 0; p < H.gains.cols; ++p) os << ", led_" << p;
  os << "\n";
  char buf[32];
  for (std::size_t q = 0; q < H.gains.rows; ++q) {
    os << q;
    for (std::size_t p = 0; p < H.gains.cols; ++p) {
      std::snprintf(buf, sizeof buf, "%.17g", H.gains(q, p));
      os << ", " << buf;
    }
    os << "\n";
  }
}

ChannelMatrix read_channel_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.is_open(), "cannot open channel file");
  std::string line;
  std::size_t cols = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#') continue;
    if (line.compare(b, 8, "pd_index") == 0) continue;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream fields(line);
    std::size_t index = 0;
    fields >> index;
    require(static_cast<bool>(fields), "malformed channel file row");
    require(index == rows.size(), "channel file rows are out of order");
    std::vector<double> gains;
    double v = 0.0;
    while (fields >> v) gains.push_back(v);
    require(!gains.empty(), "channel file row has no gains");
    if (cols == 0) cols = gains.size();
    require(gains.size() == cols, "channel file rows have uneven lengths");
    rows.push_back(std::move(gains));
  }
  require(!rows.empty(), "channel file holds no rows");
  ChannelMatrix H;
  H.gains = Mat(rows.size(), cols);
  for (std::size_t q = 0; q < rows.size(); ++q)
    for (std::size_t p = 0; p < cols; ++p) H.gains(q, p) = rows[q][p];
  return H;
}

}  // namespace vlc
