#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace p2pss {

/// Items are 32-bit unsigned identifiers drawn from the universe [m].
using ItemId = std::uint32_t;

/// Peers are indexed 0..p-1.
using PeerId = std::uint32_t;

enum class PeerStatus : std::uint8_t { Online, Offline, Dead };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// q̃ = 0 at the queried peer: the averaging mass never reached it.
class DegenerateEstimate : public Error {
 public:
  using Error::Error;
};

/// ε* >= 1 at query time; the selection threshold carries no guarantee.
class InsufficientRounds : public Error {
 public:
  using Error::Error;
};

/// No finite k achieves the requested tolerance with the given rounds.
class InfeasibleRounds : public Error {
 public:
  using Error::Error;
};

class ConnectivityFailure : public Error {
 public:
  using Error::Error;
};

class IsolatedPeer : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace p2pss
