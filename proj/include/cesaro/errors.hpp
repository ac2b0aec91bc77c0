#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cesaro {

// Invalid tree description: multiple roots, cycles, disconnected vertices,
// duplicate edges, bad generator parameters.
struct MalformedSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A StateVector was used with a tree it is not bound to.
struct TreeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense assembly requested beyond the configured vertex cap.
struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A per-level query exceeded the truncation depth.
struct DepthExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Basis image norm requested at a vertex whose image series diverges.
struct NotInDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap before meeting tolerance.
struct NoConvergence : std::runtime_error {
  std::int64_t iterations;
  explicit NoConvergence(const std::string& what, std::int64_t iters)
      : std::runtime_error(what), iterations(iters) {}
};

// Eigenvalue parameter outside the unit disc centred at 1.
struct OutsideDisc : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Decomposition requested for a family whose branching vertices occur at
// unboundedly many depths.
struct InfiniteBranchingIndex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The truncation is too short to expose the structure being queried.
struct TruncationTooShallow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Canonical hyponormality vector requested on a tree without branching.
struct NoBranchingVertex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Nonnegative-sequence oracle fed a negative entry.
struct NegativeEntry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Chain index beyond the number of enumerable maximal chains.
struct PathIndexOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File-level failures (missing file, unreadable, unwritable target).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cesaro
