// core/include/spoofcm/audio.hpp

// Copyright 2026  spoofcm authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPOOFCM_AUDIO_HPP_
#define SPOOFCM_AUDIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace spoofcm {

/// Mono sample sequence. Amplitudes live in [-1, 1]; int16 input is scaled
/// by 1/32768 so -32768 maps to -1.0 exactly.
struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = 16000;
  std::string utt_id;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

enum class WindowKind { kHamming, kHann, kRectangular };

/// Framed, windowed samples laid out row-major [num_frames x frame_len].
/// Frame t starts at sample t * hop_len of the (pre-emphasized) signal.
struct FrameMatrix {
  std::vector<double> data;
  std::size_t num_frames = 0;
  std::size_t frame_len = 0;
  std::size_t hop_len = 0;
  WindowKind window_kind = WindowKind::kHamming;

  const double *frame(std::size_t t) const { return data.data() + t * frame_len; }
};

/// Reads a RIFF/WAVE file: PCM16 or IEEE float32, 1 or 2 channels.
/// Stereo is averaged to mono. Sample rate is preserved.
/// Throws MalformedContainer, UnsupportedEncoding, EmptyAudio.
AudioClip read_wav(const std::string &path);

/// Writes a PCM16 mono WAV. Amplitudes are clamped to [-1, 1] and rounded
/// to the nearest int16 (a * 32768, clamped to 32767).
void write_wav(const std::string &path, const AudioClip &clip);

/// Windowed-sinc polyphase resampler (Kaiser beta=8, 32 zero crossings per
/// side at the lower of the two rates). Identity when rates match; output
/// duration matches the input within one target sample period. Signal edges
/// are extended by replication so DC is preserved end to end.
AudioClip resample(const AudioClip &clip, int target_hz);

/// Pre-emphasizes (y[n] = x[n] - preemph * x[n-1], y[0] = x[0]), slices into
/// frames of frame_ms every hop_ms, and applies the window.
/// Throws ClipTooShort when the clip holds less than one frame.
FrameMatrix frame_and_window(const AudioClip &clip, double frame_ms,
                             double hop_ms, WindowKind window_kind,
                             double preemph);

/// Window values for a frame of the given length (symmetric definitions).
std::vector<double> make_window(WindowKind kind, std::size_t length);

}  // namespace spoofcm

#endif  // SPOOFCM_AUDIO_HPP_
