// dent/synthetic.h

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

// Speech-like test material and a reference channel, for self-recovery runs
// and benchmarks where no real parallel corpus is available.

#ifndef DENT_SYNTHETIC_H_
#define DENT_SYNTHETIC_H_

#include <cstdint>

#include "dent/signal.h"

namespace dent {

// Harmonic voiced segments with moving formants, unvoiced bursts, syllable
// envelopes and short pauses of digital silence. Peak amplitude 0.5.
AudioBuffer synth_speech(double seconds, std::uint64_t seed,
                         int sample_rate = kDefaultSampleRate);

// Hand-picked distortion channel: saturating waveshaper, 8:1 compressor,
// 300-3400 Hz band-pass audio EQ and pink-shaped noise.
DentParams reference_channel(int ds_factor = 16,
                             int sample_rate = kDefaultSampleRate);

struct ParallelCorpus {
  AudioBuffer clean;
  AudioBuffer noisy;
};

// noisy = forward(clean) through `channel`; each 1-second chunk uses its own
// noise seed derived from `seed`.
ParallelCorpus make_parallel_corpus(double seconds, std::uint64_t seed,
                                    const DentParams &channel);

}  // namespace dent

#endif  // DENT_SYNTHETIC_H_
