// Copyright 2026 The autosec Authors.
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

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "autosec/learner.hpp"
#include "autosec/mealy.hpp"

namespace autosec {

std::string to_hex(const Frame& frame);
/// Accepts hex digit pairs, optionally separated by spaces. Throws Error.
Frame from_hex(std::string_view text);

// ---------------------------------------------------------------------------
// Machine-backed SUL: frames carry the symbol text.

class MachineSul : public SulSession {
 public:
  explicit MachineSul(MealyMachine machine);
  [[nodiscard]] const MealyMachine& machine() const { return machine_; }

 protected:
  void do_reset() override { state_ = machine_.initial(); }
  Frame do_step(const Frame& input) override;

 private:
  MealyMachine machine_;
  std::size_t state_;
};

class IdentityMapper : public Mapper {
 public:
  IdentityMapper(std::vector<std::string> inputs, std::vector<std::string> outputs)
      : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {}
  [[nodiscard]] const std::vector<std::string>& inputs() const override { return inputs_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const override { return outputs_; }
  void reset() override {}
  Frame concretize(const std::string& input) override { return Frame(input.begin(), input.end()); }
  std::string abstract_output(const Frame& output) override { return std::string(output.begin(), output.end()); }

 private:
  std::vector<std::string> inputs_, outputs_;
};

// ---------------------------------------------------------------------------
// UDS secure access ECU.
//
// Requests: 10 03 extended session, 10 02 programming session,
// 27 01 request seed, 27 02 KH KL send key. Responses: 50 xx positive
// session reply, 67 01 SH SL seed, 67 02 key accepted, 7F sid nrc negative.

enum class Variant { Buggy, Fixed };

constexpr std::uint16_t kUdsKeyMask = 0xCAFE;
constexpr std::uint16_t uds_key(std::uint16_t seed) { return static_cast<std::uint16_t>(seed ^ kUdsKeyMask); }

class UdsEcuDouble : public SulSession {
 public:
  explicit UdsEcuDouble(Variant variant, std::uint16_t prng_seed = 0x1D2C);

  [[nodiscard]] int state() const { return state_; }  // 0..6
  [[nodiscard]] std::optional<std::uint16_t> current_seed() const { return seed_; }
  [[nodiscard]] std::optional<std::uint16_t> previous_seed() const { return previous_; }

 protected:
  void do_reset() override;
  Frame do_step(const Frame& input) override;

 private:
  std::uint16_t next_seed();

  Variant variant_;
  std::uint16_t lcg_;
  int state_ = 0;
  std::optional<std::uint16_t> seed_;
  std::optional<std::uint16_t> previous_;
};

/// SecAcc(Key) and SecAcc(NewKey) send f(latest seed); SecAcc(Wrong) sends
/// its complement; SecAcc(PrevKey) sends f(seed before the latest), or
/// f(latest) ^ 0x00FF when only one seed has been seen.
class UdsMapper : public Mapper {
 public:
  UdsMapper();
  [[nodiscard]] const std::vector<std::string>& inputs() const override { return inputs_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const override { return outputs_; }
  void reset() override;
  Frame concretize(const std::string& input) override;
  std::string abstract_output(const Frame& output) override;

 private:
  std::vector<std::string> inputs_, outputs_;
  std::optional<std::uint16_t> seed_;
  std::optional<std::uint16_t> previous_;
};

// ---------------------------------------------------------------------------
// BLE pairing responder.
//
// Events: C0 connect, C1 disconnect, C2 controller reset,
// 01 03 00 AQ 10 07 07 pairing request (AQ 01 legacy, 09 secure),
// 03 +16 bytes confirm, 04 +16 bytes random, C3 encryption request.
// Responses: D0 connected, D1 disconnected, D2 reset done, D3 not connected,
// 02 03 00 AQ 10 07 07 pairing response, 03/04 +16 bytes, D4 encrypted,
// 05 rr pairing failed, D5 link-layer only.

class BlePairingDouble : public SulSession {
 public:
  enum class State { Idle, Connected, RequestLegacy, RequestSecure, Mixed, Confirmed, Randomized, Encrypted, Deadlock };

  explicit BlePairingDouble(Variant variant);
  [[nodiscard]] State state() const { return state_; }

 protected:
  void do_reset() override;
  Frame do_step(const Frame& input) override;

 private:
  Variant variant_;
  State state_ = State::Idle;
};

class BleMapper : public Mapper {
 public:
  BleMapper();
  [[nodiscard]] const std::vector<std::string>& inputs() const override { return inputs_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const override { return outputs_; }
  void reset() override {}
  Frame concretize(const std::string& input) override;
  std::string abstract_output(const Frame& output) override;

 private:
  std::vector<std::string> inputs_, outputs_;
};

// ---------------------------------------------------------------------------

struct SulBundle {
  std::unique_ptr<SulSession> sul;
  std::unique_ptr<Mapper> mapper;
  std::string name;
};

/// "uds-buggy", "uds-fixed", "ble-buggy", "ble-fixed" or "file:<machine>".
SulBundle make_sul(const std::string& spec);

/// Newline-delimited hex frames in, hex frames out. A line "reset" resets
/// the session and answers "ok"; a bad line answers "error: ...".
void serve_frames(SulSession& sul, std::istream& in, std::ostream& out);

}  // namespace autosec
