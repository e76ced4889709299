/*!
  \file divisors.hpp
  \brief Divisor candidates of a pivot
*/

#pragma once

#include "../netlist.hpp"
#include "../partition.hpp"
#include "../traversal.hpp"
#include "params.hpp"
#include "window.hpp"

#include <algorithm>
#include <vector>

namespace sllopt
{

struct divisor_set
{
  /*! \brief Pivot TFI signals first, then the remaining window signals, each by (level, id). */
  std::vector<node_id> candidates;

  /*! \brief Candidates on the pivot's die, in candidate order. */
  std::vector<node_id> in_die;
};

/*! \brief Window signals usable as pivot inputs.
 *
 * Excludes the pivot, its MFFC and its TFO.  Every window signal whose
 * level is within the bound qualifies, including window PIs outside the
 * pivot's TFI; the cap truncates in candidate order.
 */
inline divisor_set collect_divisors( netlist const& ntk, std::vector<uint32_t> const& level, window const& w,
                                     die_assignment const& a, resynth_params const& ps )
{
  std::vector<uint8_t> excluded( ntk.size(), 0u ), tfi_mark( ntk.size(), 0u );
  for ( auto n : mffc( ntk, w.pivot ) )
    excluded[n] = 1u;
  for ( auto n : w.tfo )
    excluded[n] = 1u;
  for ( auto n : w.tfi )
    tfi_mark[n] = 1u;

  auto const limit = static_cast<uint64_t>( level[w.pivot] ) + ps.level_bound();
  std::vector<node_id> related, others;
  auto consider = [&]( node_id n ) {
    if ( excluded[n] || level[n] > limit )
      return;
    ( tfi_mark[n] ? related : others ).push_back( n );
  };
  for ( auto n : w.pis )
    consider( n );
  for ( auto n : w.nodes )
    consider( n );
  detail::sort_by_level( related, level );
  detail::sort_by_level( others, level );

  divisor_set ds;
  ds.candidates = std::move( related );
  ds.candidates.insert( ds.candidates.end(), others.begin(), others.end() );
  if ( ds.candidates.size() > ps.divisor_cap )
    ds.candidates.resize( ps.divisor_cap );
  auto const die = a.die( w.pivot );
  for ( auto n : ds.candidates )
    if ( a.die( n ) == die )
      ds.in_die.push_back( n );
  return ds;
}

} /* namespace sllopt */
