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

#include "autosec/suls.hpp"

#include <array>
#include <istream>
#include <ostream>

#include "autosec/error.hpp"

namespace autosec {

namespace {

constexpr std::uint8_t kNrcServiceNotSupported = 0x11;
constexpr std::uint8_t kNrcMalformed = 0x13;
constexpr std::uint8_t kNrcConditionsNotCorrect = 0x22;
constexpr std::uint8_t kNrcSequenceError = 0x24;
constexpr std::uint8_t kNrcInvalidKey = 0x35;

Frame negative(std::uint8_t sid, std::uint8_t nrc) { return {0x7F, sid, nrc}; }

Frame word16(std::uint8_t a, std::uint8_t b, std::uint16_t v) {
  return {a, b, static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v & 0xFF)};
}

constexpr std::uint8_t kAuthLegacy = 0x01;
constexpr std::uint8_t kAuthSecure = 0x09;

Frame pairing_frame(std::uint8_t opcode, std::uint8_t auth) { return {opcode, 0x03, 0x00, auth, 0x10, 0x07, 0x07}; }

Frame value_frame(std::uint8_t opcode, std::uint8_t base) {
  Frame f{opcode};
  for (std::uint8_t i = 0; i < 16; ++i) f.push_back(static_cast<std::uint8_t>(base + i));
  return f;
}

}  // namespace

std::string to_hex(const Frame& frame) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (i) out += ' ';
    out += kDigits[frame[i] >> 4];
    out += kDigits[frame[i] & 0xF];
  }
  return out;
}

Frame from_hex(std::string_view text) {
  auto digit = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Frame out;
  int high = -1;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r') {
      if (high >= 0) throw Error("odd number of hex digits");
      continue;
    }
    const int d = digit(c);
    if (d < 0) throw Error(std::string("invalid hex character '") + c + "'");
    if (high < 0) {
      high = d;
    } else {
      out.push_back(static_cast<std::uint8_t>(high * 16 + d));
      high = -1;
    }
  }
  if (high >= 0) throw Error("odd number of hex digits");
  return out;
}

// ---------------------------------------------------------------------------

MachineSul::MachineSul(MealyMachine machine) : machine_(std::move(machine)) {
  machine_.check_complete();
  state_ = machine_.initial();
}

Frame MachineSul::do_step(const Frame& input) {
  const std::string symbol(input.begin(), input.end());
  auto i = machine_.input_index(symbol);
  if (!i) throw Error("machine SUL: unknown input \"" + symbol + "\"");
  const std::string& out = machine_.output_symbol(state_, *i);
  state_ = machine_.target(state_, *i);
  return Frame(out.begin(), out.end());
}

// ---------------------------------------------------------------------------

UdsEcuDouble::UdsEcuDouble(Variant variant, std::uint16_t prng_seed) : variant_(variant), lcg_(prng_seed) {}

void UdsEcuDouble::do_reset() {
  state_ = 0;
  seed_.reset();
  previous_.reset();
}

std::uint16_t UdsEcuDouble::next_seed() {
  // Full-period LCG mod 2^16. A seed whose complement equals the seed it
  // replaces is skipped so that the complement key never doubles as the
  // previous key.
  for (;;) {
    lcg_ = static_cast<std::uint16_t>(lcg_ * 25173u + 13849u);
    if (!seed_ || lcg_ != static_cast<std::uint16_t>(*seed_ ^ 0xFFFF)) return lcg_;
  }
}

Frame UdsEcuDouble::do_step(const Frame& in) {
  if (in.empty()) return {};
  const std::uint8_t sid = in[0];
  const bool fixed = variant_ == Variant::Fixed;
  if (sid == 0x10) {
    if (in.size() != 2 || (in[1] != 0x02 && in[1] != 0x03)) return negative(sid, kNrcMalformed);
    if (in[1] == 0x03) {
      if (state_ != 0) return negative(sid, kNrcConditionsNotCorrect);
      state_ = 1;
      return {0x50, 0x03};
    }
    switch (state_) {
      case 1:
      case 4:
        state_ = 2;
        return {0x50, 0x02};
      case 5:
        state_ = 6;
        return {0x50, 0x02};
      default:
        return negative(sid, kNrcConditionsNotCorrect);
    }
  }
  if (sid != 0x27) return negative(sid, kNrcServiceNotSupported);
  if (in.size() == 2 && in[1] == 0x01) {
    if (state_ != 2 && state_ != 3 && state_ != 4) return negative(sid, kNrcSequenceError);
    const std::uint16_t s = next_seed();
    previous_ = seed_;
    seed_ = s;
    state_ = state_ == 4 ? 5 : 3;
    return word16(0x67, 0x01, s);
  }
  if (in.size() != 4 || in[1] != 0x02) return negative(sid, kNrcMalformed);
  if (state_ < 3) return negative(sid, kNrcSequenceError);

  const std::uint16_t key = static_cast<std::uint16_t>((in[2] << 8) | in[3]);
  const bool correct = seed_ && key == uds_key(*seed_);
  const bool previous = !correct && previous_ && key == uds_key(*previous_);
  auto accept = [&](int next) {
    state_ = next;
    return Frame{0x67, 0x02};
  };
  auto reject = [&] {
    state_ = 2;
    return negative(sid, kNrcInvalidKey);
  };
  switch (state_) {
    case 3:
      return correct ? accept(4) : reject();
    case 4:
      return correct || !fixed ? accept(4) : reject();
    case 5:
      return correct || !fixed ? accept(5) : reject();
    default:  // 6
      return previous && !fixed ? accept(4) : reject();
  }
}

UdsMapper::UdsMapper()
    : inputs_{"ExtDiag",       "Prog",          "SecAcc()", "SecAcc(Key)", "SecAcc(Wrong)", "SecAcc(PrevKey)",
              "SecAcc(NewKey)"},
      outputs_{"ok", "seed", "accept", "reject", "no_response"} {}

void UdsMapper::reset() {
  seed_.reset();
  previous_.reset();
}

Frame UdsMapper::concretize(const std::string& input) {
  const std::uint16_t latest = seed_.value_or(0);
  if (input == "ExtDiag") return {0x10, 0x03};
  if (input == "Prog") return {0x10, 0x02};
  if (input == "SecAcc()") return {0x27, 0x01};
  if (input == "SecAcc(Key)" || input == "SecAcc(NewKey)") return word16(0x27, 0x02, uds_key(latest));
  if (input == "SecAcc(Wrong)") return word16(0x27, 0x02, static_cast<std::uint16_t>(uds_key(latest) ^ 0xFFFF));
  if (input == "SecAcc(PrevKey)") {
    return word16(0x27, 0x02,
                  previous_ ? uds_key(*previous_) : static_cast<std::uint16_t>(uds_key(latest) ^ 0x00FF));
  }
  throw Error("UDS mapper: unknown input \"" + input + "\"");
}

std::string UdsMapper::abstract_output(const Frame& out) {
  if (out.empty()) return "no_response";
  if (out[0] == 0x50) return "ok";
  if (out[0] == 0x7F) return "reject";
  if (out.size() == 4 && out[0] == 0x67 && out[1] == 0x01) {
    previous_ = seed_;
    seed_ = static_cast<std::uint16_t>((out[2] << 8) | out[3]);
    return "seed";
  }
  if (out.size() == 2 && out[0] == 0x67 && out[1] == 0x02) return "accept";
  return "unrecognized";
}

// ---------------------------------------------------------------------------

BlePairingDouble::BlePairingDouble(Variant variant) : variant_(variant) {}

void BlePairingDouble::do_reset() { state_ = State::Idle; }

Frame BlePairingDouble::do_step(const Frame& in) {
  static const Frame kError{0x05, 0x08};
  static const Frame kMalformed{0x05, 0x0A};
  enum class Ev { Connect, Legacy, Secure, Confirm, Random, Encrypt, Disconnect, Reset };

  Ev ev;
  if (in.size() == 1 && in[0] == 0xC0) {
    ev = Ev::Connect;
  } else if (in.size() == 1 && in[0] == 0xC1) {
    ev = Ev::Disconnect;
  } else if (in.size() == 1 && in[0] == 0xC2) {
    ev = Ev::Reset;
  } else if (in.size() == 1 && in[0] == 0xC3) {
    ev = Ev::Encrypt;
  } else if (in.size() == 7 && in[0] == 0x01 && (in[3] == kAuthLegacy || in[3] == kAuthSecure)) {
    ev = in[3] == kAuthLegacy ? Ev::Legacy : Ev::Secure;
  } else if (in.size() == 17 && in[0] == 0x03) {
    ev = Ev::Confirm;
  } else if (in.size() == 17 && in[0] == 0x04) {
    ev = Ev::Random;
  } else {
    return kMalformed;
  }

  if (ev == Ev::Reset) {
    state_ = State::Idle;
    return {0xD2};
  }
  if (state_ == State::Idle) {
    if (ev != Ev::Connect) return {0xD3};
    state_ = State::Connected;
    return {0xD0};
  }
  if (state_ == State::Deadlock) {
    if (ev == Ev::Connect) return {0xD0};
    if (ev == Ev::Disconnect) return {0xD1};
    return {0xD5};
  }
  if (ev == Ev::Disconnect) {
    state_ = State::Idle;
    return {0xD1};
  }
  if (ev == Ev::Connect) return kError;

  auto fail = [&] {
    if (state_ != State::Encrypted) state_ = State::Connected;
    return kError;
  };
  switch (state_) {
    case State::Connected:
      if (ev == Ev::Legacy || ev == Ev::Secure) {
        state_ = ev == Ev::Legacy ? State::RequestLegacy : State::RequestSecure;
        return pairing_frame(0x02, ev == Ev::Legacy ? kAuthLegacy : kAuthSecure);
      }
      return fail();
    case State::RequestLegacy:
    case State::RequestSecure: {
      const Ev same = state_ == State::RequestLegacy ? Ev::Legacy : Ev::Secure;
      const Ev other = state_ == State::RequestLegacy ? Ev::Secure : Ev::Legacy;
      if (ev == same) return pairing_frame(0x02, same == Ev::Legacy ? kAuthLegacy : kAuthSecure);
      if (ev == other) {
        if (variant_ == Variant::Fixed) return fail();
        state_ = State::Mixed;
        return pairing_frame(0x02, other == Ev::Legacy ? kAuthLegacy : kAuthSecure);
      }
      if (ev == Ev::Confirm) {
        state_ = State::Confirmed;
        return value_frame(0x03, 0xA0);
      }
      return fail();
    }
    case State::Mixed:
      if (ev == Ev::Legacy || ev == Ev::Secure) {
        state_ = State::Deadlock;
        return {0xD5};
      }
      return fail();
    case State::Confirmed:
      if (ev == Ev::Random) {
        state_ = State::Randomized;
        return value_frame(0x04, 0xB0);
      }
      return fail();
    case State::Randomized:
      if (ev == Ev::Encrypt) {
        state_ = State::Encrypted;
        return {0xD4};
      }
      return fail();
    default:  // Encrypted
      return fail();
  }
}

BleMapper::BleMapper()
    : inputs_{"connect",        "pairing_request_legacy", "pairing_request_secure", "pairing_confirm",
              "pairing_random", "encryption_request",     "disconnect",             "controller_reset"},
      outputs_{"connected",       "disconnected",   "reset_ok",  "no_conn", "pairing_response",
               "pairing_confirm", "pairing_random", "encrypted", "error",   "ll_only"} {}

Frame BleMapper::concretize(const std::string& input) {
  if (input == "connect") return {0xC0};
  if (input == "pairing_request_legacy") return pairing_frame(0x01, kAuthLegacy);
  if (input == "pairing_request_secure") return pairing_frame(0x01, kAuthSecure);
  if (input == "pairing_confirm") return value_frame(0x03, 0x10);
  if (input == "pairing_random") return value_frame(0x04, 0x20);
  if (input == "encryption_request") return {0xC3};
  if (input == "disconnect") return {0xC1};
  if (input == "controller_reset") return {0xC2};
  throw Error("BLE mapper: unknown input \"" + input + "\"");
}

std::string BleMapper::abstract_output(const Frame& out) {
  if (out.empty()) return "unrecognized";
  switch (out[0]) {
    case 0xD0: return "connected";
    case 0xD1: return "disconnected";
    case 0xD2: return "reset_ok";
    case 0xD3: return "no_conn";
    case 0xD4: return "encrypted";
    case 0xD5: return "ll_only";
    case 0x02: return "pairing_response";
    case 0x03: return "pairing_confirm";
    case 0x04: return "pairing_random";
    case 0x05: return "error";
    default: return "unrecognized";
  }
}

// ---------------------------------------------------------------------------

SulBundle make_sul(const std::string& spec) {
  SulBundle b;
  b.name = spec;
  if (spec == "uds-buggy" || spec == "uds-fixed") {
    b.sul = std::make_unique<UdsEcuDouble>(spec == "uds-buggy" ? Variant::Buggy : Variant::Fixed);
    b.mapper = std::make_unique<UdsMapper>();
  } else if (spec == "ble-buggy" || spec == "ble-fixed") {
    b.sul = std::make_unique<BlePairingDouble>(spec == "ble-buggy" ? Variant::Buggy : Variant::Fixed);
    b.mapper = std::make_unique<BleMapper>();
  } else if (spec.rfind("file:", 0) == 0) {
    MealyMachine m = load_mealy(spec.substr(5));
    b.mapper = std::make_unique<IdentityMapper>(m.inputs(), m.outputs());
    b.sul = std::make_unique<MachineSul>(std::move(m));
  } else {
    throw Error("unknown SUL \"" + spec + "\" (expected uds-buggy, uds-fixed, ble-buggy, ble-fixed or file:<machine>)");
  }
  return b;
}

void serve_frames(SulSession& sul, std::istream& in, std::ostream& out) {
  sul.reset();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "reset") {
      sul.reset();
      out << "ok\n";
    } else {
      try {
        out << to_hex(sul.step(from_hex(line))) << '\n';
      } catch (const Error& e) {
        out << "error: " << e.what() << '\n';
      }
    }
    out.flush();
  }
}

}  // namespace autosec
