#pragma once

#include "../traversal.hpp"

#include <cstdint>
#include <optional>

namespace sllopt
{

struct resynth_params
{
  /*! \brief TFO depth of the window. */
  uint32_t d1{ 2u };

  /*! \brief TFI depth of the window. */
  uint32_t d2{ 8u };

  uint32_t window_pi_cap{ 14u };
  uint32_t divisor_cap{ 150u };

  /*! \brief Divisors deeper than `level(pivot) + bound` are dropped; defaults to `d2`. */
  std::optional<uint32_t> divisor_level_bound;

  /*! \brief Number of sweeps; 0 sweeps until a pass commits nothing. */
  uint32_t passes{ 1u };

  /*! \brief Re-simulates the window miter before every commit. */
  bool verify_each_commit{ true };

  /*! \brief Largest number of in-die divisors added to the base support. */
  uint32_t max_augment{ 1u };

  /*! \brief Only pivots on this die are considered. */
  std::optional<uint32_t> freeze_die;

  uint32_t level_bound() const { return divisor_level_bound.value_or( d2 ); }
};

} /* namespace sllopt */
