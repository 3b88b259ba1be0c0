// Copyright 2026 The DNSC Authors
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

/* Diffusion-enhanced neural speech codec: C interface.
 *
 * Every call returns a dnsc_status. On failure the calling thread's last
 * error message is available from dnsc_last_error() until its next call.
 * Strings and buffers handed out by the library are released with
 * dnsc_free().
 */
#ifndef DNSC_DNSC_H_
#define DNSC_DNSC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DNSC_API __declspec(dllexport)
#else
#define DNSC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dnsc_status {
  DNSC_OK = 0,
  DNSC_ERR_CONFIG = 1,
  DNSC_ERR_FORMAT = 2,
  DNSC_ERR_UNSUPPORTED = 3,
  DNSC_ERR_IO = 4,
  DNSC_ERR_DATA = 5,
  DNSC_ERR_SHAPE = 6,
  DNSC_ERR_STRUCTURE = 7,
  DNSC_ERR_INDEX = 8,
  DNSC_ERR_NUMERIC = 9,
  DNSC_ERR_TRAINING = 10,
  DNSC_ERR_DOMAIN = 11,
  DNSC_ERR_CORRUPTION = 12,
  DNSC_ERR_TRUNCATION = 13,
  DNSC_ERR_USAGE = 14,
  DNSC_ERR_INTERNAL = 15,
  DNSC_ERR_ARGUMENT = 16
} dnsc_status;

DNSC_API const char* dnsc_status_name(dnsc_status status);
DNSC_API const char* dnsc_last_error(void);

/* Process exit code for a status: 0 ok, 1 internal or training failure,
 * 2 user or format error. */
DNSC_API int dnsc_exit_code(dnsc_status status);

DNSC_API void dnsc_free(void* ptr);

typedef void (*dnsc_progress_fn)(void* user, const char* stage, long step, double loss);

typedef struct dnsc_train_options {
  /* "key=value" config overrides applied after the config file. */
  const char* const* overrides;
  size_t override_count;
  /* Recorded verbatim in the run manifest. May be NULL. */
  const char* command_line;
  dnsc_progress_fn progress;
  void* progress_user;
} dnsc_train_options;

/* Trains the cell described by the config file into out_dir and writes
 * manifest.json. After a training failure out_dir keeps the checkpoints of
 * the stages that completed and a manifest marked failed. */
DNSC_API dnsc_status dnsc_train(const char* config_path, const char* out_dir,
                                const dnsc_train_options* options);

typedef struct dnsc_codec dnsc_codec;

typedef struct dnsc_codec_info {
  int config_id;
  int bitrate_bps;
  int sample_rate;
  int hop;
  int bits_per_frame;
  char label[16];
} dnsc_codec_info;

DNSC_API dnsc_status dnsc_open(const char* run_dir, dnsc_codec** out);
DNSC_API void dnsc_close(dnsc_codec* codec);
DNSC_API dnsc_status dnsc_info(const dnsc_codec* codec, dnsc_codec_info* out);

/* In-memory coding. Outputs are allocated by the library. */
DNSC_API dnsc_status dnsc_encode(const dnsc_codec* codec, const double* samples, size_t count,
                                 int sample_rate, uint8_t** bytes, size_t* size);
/* steps = 0 uses the run's sampling steps. */
DNSC_API dnsc_status dnsc_decode(const dnsc_codec* codec, const uint8_t* bytes, size_t size,
                                 uint64_t seed, int steps, double** samples, size_t* count);

/* File coding. No output file is left behind on failure. */
DNSC_API dnsc_status dnsc_encode_file(const dnsc_codec* codec, const char* wav_path,
                                      const char* out_path);
DNSC_API dnsc_status dnsc_decode_file(const dnsc_codec* codec, const char* stream_path,
                                      const char* wav_path, uint64_t seed, int steps);

/* Scores every run directory matching runs_glob on the corpus and writes
 * the metric CSV plus a "<out_csv>.summary" text sidecar. */
DNSC_API dnsc_status dnsc_matrix(const char* runs_glob, const char* corpus, uint64_t seed,
                                 const char* out_csv);

typedef void (*dnsc_check_fn)(void* user, const char* name, int passed, const char* detail);

/* Runs the property checks on a run directory. *all_passed is 1 when every
 * check passed; a failing check is not an error status. */
DNSC_API dnsc_status dnsc_verify(const char* run_dir, dnsc_check_fn on_check, void* user,
                                 int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* DNSC_DNSC_H_ */
