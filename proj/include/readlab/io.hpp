// Copyright 2026 The readlab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "readlab/error.hpp"

namespace readlab {

inline constexpr std::string_view kVersion = "0.1.0";

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Stamped on every output artifact. The config hash covers the inputs and
// flags of a run, never its output locations.
struct RunMetadata {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;

  static RunMetadata make(std::string command, std::uint64_t seed, std::string_view canonical_config) {
    return {std::move(command), seed, fnv1a_hex(canonical_config)};
  }

  nlohmann::ordered_json to_json() const {
    return {{"tool", "readlab"}, {"version", kVersion}, {"command", command},
            {"seed", seed}, {"config_hash", config_hash}};
  }

  // Header line for CSV/TSV/text outputs.
  std::string comment_line() const {
    return "# readlab " + std::string(kVersion) + " command=" + command +
           " seed=" + std::to_string(seed) + " config=" + config_hash;
  }
};

// Writes to a sibling temp file and renames it over `path`, so readers never
// observe a truncated file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw Error(ErrorCode::kIoError, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot move output into place: " + path.string());
  }
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// READLAB_WORKERS caps parallelism; defaults to the hardware concurrency.
inline std::size_t worker_count() {
  std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("READLAB_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) workers = std::min<std::size_t>(workers, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      // ignore malformed values
    }
  }
  return workers;
}

// Runs body(i) for i in [0, n) over up to worker_count() threads. Results
// must be written by index; if several items throw, the lowest index wins so
// failures are reported the same way on every run.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(n);
  auto run_range = [&](std::size_t worker) {
    for (std::size_t i = worker; i < n; i += workers) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    run_range(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run_range, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace readlab
