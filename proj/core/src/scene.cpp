#include "fmcw/scene.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fmcw {
namespace {

std::vector<double> parse_numbers(const std::string& text, size_t expected,
                                  const std::string& what) {
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (out.size() != expected)
    throw std::runtime_error(what + ": expected " + std::to_string(expected) +
                             " numbers, got '" + text + "'");
  return out;
}

bool segment_hits_box(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double x_lo, double x_hi,
                      double y_lo, double y_hi) {
  if (x_lo > x_hi || y_lo > y_hi) return false;  // shrink larger than the box
  // Liang-Barsky slab clipping on the parameterized segment a + t (b - a).
  double t0 = 0.0, t1 = 1.0;
  const Eigen::Vector2d d = b - a;
  const double lo[2] = {x_lo, y_lo};
  const double hi[2] = {x_hi, y_hi};
  for (int axis = 0; axis < 2; ++axis) {
    if (std::abs(d[axis]) < 1e-15) {
      if (a[axis] < lo[axis] || a[axis] > hi[axis]) return false;
      continue;
    }
    double ta = (lo[axis] - a[axis]) / d[axis];
    double tb = (hi[axis] - a[axis]) / d[axis];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  return true;
}

}  // namespace

Algo algo_from_name(const std::string& name) {
  if (name == "fft" || name == "fft2d") return Algo::Fft2d;
  if (name == "music" || name == "music2d") return Algo::Music2d;
  if (name == "lse") return Algo::Lse;
  if (name == "mle") return Algo::Mle;
  if (name == "truth") return Algo::Truth;
  throw std::runtime_error("unknown estimator '" + name + "' (fft2d, music2d, lse, mle, truth)");
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::Fft2d: return "fft";
    case Algo::Music2d: return "music";
    case Algo::Lse: return "lse";
    case Algo::Mle: return "mle";
    case Algo::Truth: return "truth";
  }
  throw std::runtime_error("unknown estimator enum value");
}

bool ObstacleRect::contains(const Eigen::Vector2d& p, double shrink) const {
  return std::abs(p.x() - center.x()) <= 0.5 * width - shrink &&
         std::abs(p.y() - center.y()) <= 0.5 * length - shrink;
}

bool ObstacleRect::intersects_segment(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                      double shrink) const {
  return segment_hits_box(a, b, center.x() - 0.5 * width + shrink,
                          center.x() + 0.5 * width - shrink, center.y() - 0.5 * length + shrink,
                          center.y() + 0.5 * length - shrink);
}

void ParkingScene::validate() const {
  radar.validate();
  if (scatterers.empty()) throw std::runtime_error("scene: no scatterers");
  if (mounts.empty()) throw std::runtime_error("scene: no radar mounts");
  if (reference_path.size() < 2) throw std::runtime_error("scene: path needs at least 2 points");
  if (!(control.dt > 0.0)) throw std::runtime_error("scene: dt must be positive");
  if (!(control.mass > 0.0)) throw std::runtime_error("scene: mass must be positive");
  if (max_frames < 1) throw std::runtime_error("scene: max_frames must be positive");
  for (const RadarMount& m : mounts)
    if (!(m.fov > 0.0)) throw std::runtime_error("scene: mount fov must be positive");
}

ParkingScene load_scene(KeyValueFile& kv) {
  ParkingScene s;
  s.radar = load_radar_config(kv, "radar.");
  s.snr_db = kv.get_double("snr_db", s.snr_db);
  for (const std::string& line : kv.get_all("scatterer")) {
    const auto v = parse_numbers(line, 2, "scatterer");
    s.scatterers.emplace_back(v[0], v[1]);
  }
  for (const std::string& line : kv.get_all("obstacle")) {
    const auto v = parse_numbers(line, 4, "obstacle");
    ObstacleRect rect;
    rect.center = {v[0], v[1]};
    rect.width = v[2];
    rect.length = v[3];
    s.obstacles.push_back(rect);
  }
  for (const std::string& line : kv.get_all("mount")) {
    const auto v = parse_numbers(line, 4, "mount");
    RadarMount m;
    m.pos_V = {v[0], v[1]};
    m.boresight = v[2];
    m.fov = v[3];
    s.mounts.push_back(m);
  }
  for (const std::string& line : kv.get_all("path")) {
    const auto v = parse_numbers(line, 2, "path");
    s.reference_path.emplace_back(v[0], v[1]);
  }
  {
    const auto v = parse_numbers(kv.get_string("start"), 3, "start");
    s.start_pos = {v[0], v[1]};
    s.start_psi = v[2];
  }
  {
    const auto v = parse_numbers(kv.get_string("goal"), 3, "goal");
    s.goal_pos = {v[0], v[1]};
    s.goal_psi = v[2];
  }
  ControllerParams& c = s.control;
  c.mass = kv.get_double("control.mass", c.mass);
  c.damping = kv.get_double("control.damping", c.damping);
  c.v_ref = kv.get_double("control.v_ref", c.v_ref);
  c.dt = kv.get_double("control.dt", c.dt);
  c.kp_v = kv.get_double("control.kp_v", c.kp_v);
  c.ki_v = kv.get_double("control.ki_v", c.ki_v);
  c.kd_v = kv.get_double("control.kd_v", c.kd_v);
  c.k_psi = kv.get_double("control.k_psi", c.k_psi);
  c.lookahead = kv.get_double("control.lookahead", c.lookahead);
  c.taper_distance = kv.get_double("control.taper_distance", c.taper_distance);
  c.v_min = kv.get_double("control.v_min", c.v_min);
  c.noise_v = kv.get_double("control.noise_v", c.noise_v);
  c.noise_psi = kv.get_double("control.noise_psi", c.noise_psi);
  s.icp.max_iters = static_cast<int>(kv.get_int("icp.max_iters", s.icp.max_iters));
  s.icp.eps_translation = kv.get_double("icp.eps_translation", s.icp.eps_translation);
  s.icp.eps_rotation = kv.get_double("icp.eps_rotation", s.icp.eps_rotation);
  s.icp.robust_c = kv.get_double("icp.robust_c", s.icp.robust_c);
  s.stop_pos_tol = kv.get_double("stop_pos_tol", s.stop_pos_tol);
  s.stop_psi_tol = kv.get_double("stop_psi_tol", s.stop_psi_tol);
  s.max_frames = static_cast<int>(kv.get_int("max_frames", s.max_frames));
  s.occlusion_shrink = kv.get_double("occlusion_shrink", s.occlusion_shrink);
  s.fft_oversample = static_cast<int>(kv.get_int("fft_oversample", s.fft_oversample));
  s.music_Ns = static_cast<int>(kv.get_int("music_Ns", s.music_Ns));
  s.music_Ms = static_cast<int>(kv.get_int("music_Ms", s.music_Ms));
  s.validate();
  return s;
}

ParkingScene load_scene_file(const std::string& path) {
  KeyValueFile kv = KeyValueFile::parse_file(path);
  ParkingScene s = load_scene(kv);
  kv.finish();
  return s;
}

Eigen::Vector2d vehicle_to_ground(const Eigen::Vector2d& pos, double psi,
                                  const Eigen::Vector2d& local) {
  return pos + rot2(psi - M_PI / 2.0) * local;
}

Eigen::Vector2d ground_to_vehicle(const Eigen::Vector2d& pos, double psi,
                                  const Eigen::Vector2d& global) {
  return rot2(M_PI / 2.0 - psi) * (global - pos);
}

VisibleScatterer range_angle_of(const ParkingScene& scene, int mi, const Eigen::Vector2d& pos,
                                double psi, const Eigen::Vector2d& point_G) {
  const RadarMount& mount = scene.mounts.at(mi);
  const Eigen::Vector2d mount_G = vehicle_to_ground(pos, psi, mount.pos_V);
  const Eigen::Vector2d v_V = rot2(M_PI / 2.0 - psi) * (point_G - mount_G);
  const Eigen::Vector2d q = rot2(-mount.boresight) * v_V;
  VisibleScatterer out;
  out.scatterer_index = -1;
  out.radar_index = mi;
  out.range = q.norm();
  out.theta = std::atan2(q.x(), q.y());  // off boresight (+y), positive toward +x
  return out;
}

Eigen::Vector2d mount_point_to_vehicle(const RadarMount& mount, double r, double theta) {
  return mount.pos_V + rot2(mount.boresight) * Eigen::Vector2d(r * std::sin(theta),
                                                               r * std::cos(theta));
}

std::vector<VisibleScatterer> visible_scatterers(const ParkingScene& scene,
                                                 const Eigen::Vector2d& pos, double psi) {
  // 2% guard below the unambiguous range; closer than that the coupling bias
  // could wrap the range bin.
  const double max_range = 0.98 * scene.radar.unambiguous_range();
  const double min_range = 0.05;
  std::vector<Eigen::Vector2d> mounts_G(scene.mounts.size());
  for (size_t mi = 0; mi < scene.mounts.size(); ++mi)
    mounts_G[mi] = vehicle_to_ground(pos, psi, scene.mounts[mi].pos_V);

  std::vector<VisibleScatterer> out;
  for (size_t si = 0; si < scene.scatterers.size(); ++si) {
    const Eigen::Vector2d& p = scene.scatterers[si];
    bool found = false;
    VisibleScatterer best;
    for (size_t mi = 0; mi < scene.mounts.size(); ++mi) {
      VisibleScatterer va = range_angle_of(scene, static_cast<int>(mi), pos, psi, p);
      if (va.range < min_range || va.range > max_range) continue;
      if (std::abs(va.theta) > 0.5 * scene.mounts[mi].fov) continue;
      bool occluded = false;
      for (const ObstacleRect& rect : scene.obstacles) {
        // A vehicle does not hide its own surface scatterers; only other
        // bodies block the ray.
        if (rect.contains(p, -scene.occlusion_shrink)) continue;
        if (rect.intersects_segment(mounts_G[mi], p, scene.occlusion_shrink)) {
          occluded = true;
          break;
        }
      }
      if (occluded) continue;
      if (!found || va.range < best.range) {
        best = va;
        best.scatterer_index = static_cast<int>(si);
        found = true;
      }
    }
    if (found) out.push_back(best);
  }
  return out;
}

}  // namespace fmcw
