// core/include/spoofcm/error.hpp

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

#ifndef SPOOFCM_ERROR_HPP_
#define SPOOFCM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace spoofcm {

/// Base class for every failure this library reports. The derived type
/// identifies the condition; what() carries the human-readable context.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

#define SPOOFCM_DEFINE_ERROR(Name)                                \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string &msg) : Error(#Name ": " + msg) {} \
  }

// audio-io
SPOOFCM_DEFINE_ERROR(MalformedContainer);
SPOOFCM_DEFINE_ERROR(UnsupportedEncoding);
SPOOFCM_DEFINE_ERROR(EmptyAudio);
SPOOFCM_DEFINE_ERROR(ClipTooShort);

// features
SPOOFCM_DEFINE_ERROR(DegenerateBand);
SPOOFCM_DEFINE_ERROR(WindowExceedsSignal);
SPOOFCM_DEFINE_ERROR(InvalidConfig);

// classifiers
SPOOFCM_DEFINE_ERROR(InsufficientData);
SPOOFCM_DEFINE_ERROR(SingularCovariance);
SPOOFCM_DEFINE_ERROR(DimensionMismatch);
SPOOFCM_DEFINE_ERROR(EmptyFeatures);
SPOOFCM_DEFINE_ERROR(SingleClass);
SPOOFCM_DEFINE_ERROR(VersionMismatch);
SPOOFCM_DEFINE_ERROR(CorruptModel);

// metrics
SPOOFCM_DEFINE_ERROR(MissingClass);

// protocol
SPOOFCM_DEFINE_ERROR(ParseError);
SPOOFCM_DEFINE_ERROR(DuplicateUtterance);
SPOOFCM_DEFINE_ERROR(SpeakerOverlap);
SPOOFCM_DEFINE_ERROR(InsufficientSpeakers);

// synthgen
SPOOFCM_DEFINE_ERROR(UnvoicedInput);

// pipeline
SPOOFCM_DEFINE_ERROR(HashMismatch);
SPOOFCM_DEFINE_ERROR(IoError);

#undef SPOOFCM_DEFINE_ERROR

}  // namespace spoofcm

#endif  // SPOOFCM_ERROR_HPP_
