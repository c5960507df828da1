// src/audio_io.cc

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

#include "dent/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace dent {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char *p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t read_u32(const unsigned char *p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
void put_u16(std::string &s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xff));
  s.push_back(static_cast<char>(v >> 8));
}
void put_u32(std::string &s, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) s.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

WavError malformed(const std::filesystem::path &path, const std::string &why) {
  return WavError(WavError::Kind::kMalformed,
                  "load_wav: " + path.string() + ": " + why);
}

}  // namespace

AudioBuffer load_wav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw WavError(WavError::Kind::kNotFound,
                   "load_wav: cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw malformed(path, "not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char *data = nullptr;
  std::size_t data_size = 0;
  bool have_fmt = false;
  for (std::size_t pos = 12; pos + 8 <= bytes.size();) {
    const unsigned char *chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > avail) throw malformed(path, "short fmt chunk");
      const unsigned char *f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 26) throw malformed(path, "short extensible fmt chunk");
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Streams written without a final size report 0 or 0xFFFFFFFF.
      data_size = std::min<std::size_t>(size, avail);
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw malformed(path, "missing fmt chunk");
  if (data == nullptr) throw malformed(path, "missing data chunk");
  if (channels == 0 || rate == 0) throw malformed(path, "zero channels or rate");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32)
    throw WavError(WavError::Kind::kUnsupported,
                   "load_wav: " + path.string() + ": unsupported codec (format " +
                       std::to_string(format) + ", " + std::to_string(bits) +
                       " bits); expected PCM16 or float32");
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  std::vector<double> samples(frames, 0.0);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char *p = data + (i * channels + c) * width;
      if (pcm16) {
        acc += static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      } else {
        const std::uint32_t raw = read_u32(p);
        float f;
        std::memcpy(&f, &raw, sizeof f);
        acc += static_cast<double>(f);
      }
    }
    samples[i] = acc / channels;
  }
  try {
    return AudioBuffer(std::move(samples), static_cast<int>(rate));
  } catch (const InvalidArgument &e) {
    throw malformed(path, e.what());
  }
}

void save_wav(const AudioBuffer &buf, const std::filesystem::path &path,
              SampleFormat format) {
  const bool pcm16 = format == SampleFormat::kPcm16;
  const std::uint16_t bits = pcm16 ? 16 : 32;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(buf.size() * (bits / 8));
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate()) * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_size);
  for (double v : buf.samples()) {
    if (pcm16) {
      const double c = std::clamp(v, -1.0, 1.0);
      const long code = std::clamp(std::lround(c * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(code)));
    } else {
      const float f = static_cast<float>(v);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      put_u32(out, raw);
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw WavError(WavError::Kind::kIo, "save_wav: cannot open " + path.string());
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os)
    throw WavError(WavError::Kind::kIo, "save_wav: write failed for " + path.string());
}

std::string params_to_text(const DentParams &p) {
  nlohmann::ordered_json j;
  j["g_distort"] = p.g_distort();
  j["drc"] = {{"T", p.drc().threshold_db},
              {"R", p.drc().ratio},
              {"alpha_A", p.drc().alpha_attack},
              {"alpha_R", p.drc().alpha_release},
              {"g_makeup", p.drc().makeup_db}};
  const auto a = p.eq_audio().fr_mag();
  const auto n = p.eq_noise().fr_mag();
  j["eq_audio"] = std::vector<double>(a.begin(), a.end());
  j["eq_noise"] = std::vector<double>(n.begin(), n.end());
  j["noise_amplitude"] = p.noise_amplitude();
  j["lambda"] = p.lambda();
  j["ds_factor"] = p.ds_factor();
  j["sample_rate"] = p.sample_rate();
  return j.dump(2) + "\n";
}

DentParams params_from_text(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw SchemaError({std::string("not valid JSON: ") + e.what()});
  }
  if (!j.is_object()) throw SchemaError({"top level must be an object"});

  std::vector<std::string> errors;
  const std::set<std::string> top = {"g_distort", "drc", "eq_audio",
                                     "eq_noise", "noise_amplitude", "lambda",
                                     "ds_factor", "sample_rate"};
  const std::set<std::string> drc_keys = {"T", "R", "alpha_A", "alpha_R",
                                          "g_makeup"};
  for (const auto &[key, _] : j.items())
    if (!top.count(key)) errors.push_back("unknown key: " + key);
  for (const auto &key : top)
    if (!j.contains(key)) errors.push_back("missing key: " + key);

  auto number = [&](const nlohmann::json &obj, const std::string &key,
                    const std::string &label) -> double {
    if (!obj.contains(key)) return 0.0;
    if (!obj[key].is_number()) {
      errors.push_back(label + ": expected a number");
      return 0.0;
    }
    return obj[key].get<double>();
  };
  auto integer = [&](const std::string &key) -> int {
    if (!j.contains(key)) return 0;
    if (!j[key].is_number_integer()) {
      errors.push_back(key + ": expected an integer");
      return 0;
    }
    return j[key].get<int>();
  };
  auto bins = [&](const std::string &key) -> std::vector<double> {
    if (!j.contains(key)) return {};
    const auto &arr = j[key];
    if (!arr.is_array()) {
      errors.push_back(key + ": expected an array");
      return {};
    }
    if (arr.size() != kEqBins) {
      errors.push_back(key + ": expected " + std::to_string(kEqBins) +
                       " bins, got " + std::to_string(arr.size()));
      return {};
    }
    std::vector<double> out;
    for (const auto &v : arr) {
      if (!v.is_number()) {
        errors.push_back(key + ": non-numeric bin");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  };

  DrcParams drc;
  if (j.contains("drc")) {
    const auto &d = j["drc"];
    if (!d.is_object()) {
      errors.push_back("drc: expected an object");
    } else {
      for (const auto &[key, _] : d.items())
        if (!drc_keys.count(key)) errors.push_back("unknown key: drc." + key);
      for (const auto &key : drc_keys)
        if (!d.contains(key)) errors.push_back("missing key: drc." + key);
      drc.threshold_db = number(d, "T", "drc.T");
      drc.ratio = number(d, "R", "drc.R");
      drc.alpha_attack = number(d, "alpha_A", "drc.alpha_A");
      drc.alpha_release = number(d, "alpha_R", "drc.alpha_R");
      drc.makeup_db = number(d, "g_makeup", "drc.g_makeup");
    }
  }
  const double g = number(j, "g_distort", "g_distort");
  const double amp = number(j, "noise_amplitude", "noise_amplitude");
  const double lambda = number(j, "lambda", "lambda");
  const int ds = integer("ds_factor");
  const int sr = integer("sample_rate");
  const std::vector<double> eq_a = bins("eq_audio");
  const std::vector<double> eq_n = bins("eq_noise");
  if (!errors.empty()) throw SchemaError(std::move(errors));
  try {
    return DentParams(g, drc, EqParams(eq_a), EqParams(eq_n), amp, lambda, ds,
                      sr);
  } catch (const InvalidArgument &e) {
    throw SchemaError({e.what()});
  }
}

void save_params(const DentParams &params, const std::filesystem::path &path) {
  std::ofstream os(path);
  if (!os) throw DataError("save_params: cannot open " + path.string());
  os << params_to_text(params);
  if (!os) throw DataError("save_params: write failed for " + path.string());
}

DentParams load_params(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_params: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return params_from_text(ss.str());
}

}  // namespace dent
