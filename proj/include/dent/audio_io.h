// dent/audio_io.h

// Copyright 2026  dent authors
//
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

#ifndef DENT_AUDIO_IO_H_
#define DENT_AUDIO_IO_H_

#include <filesystem>
#include <string>

#include "dent/error.h"
#include "dent/signal.h"

namespace dent {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavSpec {
  int sample_rate = kDefaultSampleRate;
  SampleFormat format = SampleFormat::kPcm16;
};

class WavError : public DataError {
 public:
  enum class Kind { kNotFound, kMalformed, kUnsupported, kIo };
  WavError(Kind kind, const std::string &what) : DataError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// RIFF/WAVE, PCM16 or float32 (plain or extensible). Multi-channel input is
// averaged to mono. PCM16 codes map to [-1, 1) by division by 32768.
AudioBuffer load_wav(const std::filesystem::path &path);

// Writes at buf.sample_rate(); spec.sample_rate is ignored. PCM16 output is
// clamped to [-1, 1] before quantization.
void save_wav(const AudioBuffer &buf, const std::filesystem::path &path,
              SampleFormat format = SampleFormat::kPcm16);

// Parameter file: JSON object with exactly the keys g_distort,
// drc{T, R, alpha_A, alpha_R, g_makeup}, eq_audio[1000], eq_noise[1000],
// noise_amplitude, lambda, ds_factor, sample_rate.
std::string params_to_text(const DentParams &params);
DentParams params_from_text(const std::string &text);
void save_params(const DentParams &params, const std::filesystem::path &path);
DentParams load_params(const std::filesystem::path &path);

}  // namespace dent

#endif  // DENT_AUDIO_IO_H_
