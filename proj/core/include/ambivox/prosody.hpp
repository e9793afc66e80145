#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

namespace ambivox {

class AudioClip;

/// Analysis parameters shared by every prosodic decomposition.
struct AnalysisConfig {
  double pitch_floor = 75.0;     // Hz
  double pitch_ceiling = 600.0;  // Hz
  double hop = 0.01;             // s
  double voicing_threshold = 0.45;
  /// Frames more than this far below the loudest frame count as silent; the
  /// same margin gates voicing.
  double silence_threshold_db = 25.0;
  double min_pause = 0.05;  // s
  double nucleus_dip_db = 2.0;
  /// Bonus per octave given to higher-frequency pitch candidates.
  double octave_cost = 0.01;
  /// Path cost per octave of f0 change between adjacent voiced frames.
  double octave_jump_cost = 0.35;

  /// Throws InvalidInput when an invariant is violated.
  void validate() const;

  static constexpr double kIntensityWindow = 0.05;
  double pitch_window() const { return 3.0 / pitch_floor; }
  /// Window length that fixes the shared frame grid.
  double grid_window() const;
};

/// Frame centres shared by the pitch track and the intensity contour:
/// t_i = first + i * hop. Every analysis window centred on the grid lies
/// inside the clip (clips shorter than the window get one centred frame).
struct AnalysisGrid {
  double first = 0.0;
  double hop = 0.0;
  std::size_t count = 0;

  double time(std::size_t i) const { return first + static_cast<double>(i) * hop; }
};

AnalysisGrid make_grid(double duration, const AnalysisConfig& cfg);

struct PitchTrack {
  std::vector<double> times;
  /// Empty optional marks an unvoiced frame.
  std::vector<std::optional<double>> f0;
  /// Normalized autocorrelation height of the chosen peak, in [0, 1].
  std::vector<double> strength;

  std::size_t size() const { return times.size(); }
  bool voiced(std::size_t i) const { return f0[i].has_value(); }
  std::size_t voiced_count() const;
};

struct IntensityContour {
  std::vector<double> times;
  /// dB re amplitude 1e-5; -infinity for frames of digital silence.
  std::vector<double> level_db;
  double window = AnalysisConfig::kIntensityWindow;
  double duration = 0.0;

  std::size_t size() const { return times.size(); }
};

struct Pause {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
};

struct SilenceMap {
  std::vector<Pause> pauses;
  double min_pause = 0.0;
  double threshold_db = 0.0;

  bool contains(double t) const;
  double total_pause() const;
};

struct SyllableNuclei {
  std::vector<double> nucleus_times;
  std::size_t count() const { return nucleus_times.size(); }
};

/// Autocorrelation pitch tracker: per-frame normalized autocorrelation
/// (windowed-signal autocorrelation divided by the window's own), parabolic
/// peak interpolation, then a lowest-cost path through the top candidates
/// to suppress octave jumps. Throws InvalidInput if the clip is shorter than
/// 3 / pitch_floor.
PitchTrack track_pitch(const AudioClip& clip, const AnalysisConfig& cfg);

/// 50 ms rectangular mean-square level on the analysis grid.
IntensityContour intensity_contour(const AudioClip& clip, const AnalysisConfig& cfg);

SilenceMap detect_silences(const IntensityContour& contour, const AnalysisConfig& cfg);

/// Throws InvalidInput when the contour and pitch track are on different grids.
SyllableNuclei detect_syllable_nuclei(const IntensityContour& contour, const PitchTrack& pitch,
                                      const SilenceMap& silences, const AnalysisConfig& cfg);

/// Debug dump: time,f0,strength,level_db (f0 empty when unvoiced).
void write_tracks_csv(std::ostream& out, const PitchTrack& pitch, const IntensityContour& contour);

}  // namespace ambivox
