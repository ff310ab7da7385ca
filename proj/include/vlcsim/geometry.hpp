#pragma once
#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlcsim/matrix.hpp"

namespace vlc {

using Vec3 = std::array<double, 3>;

struct OpticalParams {
  double lambda_order = 1.0;  // Lambertian order
  double phi_c = 0.0;         // FOV half-angle, radians
  double gamma = 1.0;         // concentrator refractive index
  double a_pd = 0.0;          // PD area, m^2
  void validate() const;
};

struct ChannelGeometry {
  std::vector<Vec3> led_positions;
  std::vector<Vec3> led_orientations;  // unit vectors, default straight down
  std::vector<Vec3> pd_positions;
  std::vector<Vec3> pd_orientations;  // unit vectors, default straight up
  OpticalParams params;
  void validate() const;
  std::size_t n_tx() const { return led_positions.size(); }
  std::size_t n_rx() const { return pd_positions.size(); }
};

struct ChannelMatrix {
  Mat gains;  // N_r x N_t
};

double lambertian_radiant_intensity(double phi, double lambda_order);
double effective_collection_area(const OpticalParams& p);
double los_dc_gain(std::size_t led_index, std::size_t pd_index, const ChannelGeometry& g);
ChannelMatrix build_channel_matrix(const ChannelGeometry& g);

// co-centered rectangular grids: LEDs on the z=height plane facing down,
// PDs on z=0 facing up
ChannelGeometry make_grid_scene(int led_rows, int led_cols, double led_spacing, int pd_rows,
                                int pd_cols, double pd_spacing, double height,
                                const OpticalParams& optics);

void write_channel_csv(const ChannelMatrix& H, std::ostream& os);
ChannelMatrix read_channel_csv(const std::string& path);

}  // namespace vlc
