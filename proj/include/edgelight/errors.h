// Copyright 2026 The Edgelight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EDGELIGHT_ERRORS_H_
#define EDGELIGHT_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace edgelight {

// Bad caller input: out-of-range sizes, mismatched anchor counts, zero
// vectors and the like.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The estimator was handed a cloud with no initialized anchor.
class InsufficientObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PacketError {
  kBadMagic,
  kUnsupportedVersion,
  kBadFlags,
  kTruncated,
  kLengthMismatch,
  kEntryCountOverflow,
  kIndexOutOfRange,
  kUnsortedIndices,
  kInvalidDistance,
};

std::string_view ToString(PacketError error);

class MalformedPacket : public std::runtime_error {
 public:
  MalformedPacket(PacketError kind, const std::string& detail)
      : std::runtime_error(std::string(ToString(kind)) + ": " + detail),
        kind_(kind) {}

  PacketError kind() const { return kind_; }

 private:
  PacketError kind_;
};

class MalformedRecording : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgelight

#endif  // EDGELIGHT_ERRORS_H_
