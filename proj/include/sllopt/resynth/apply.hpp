/*!
  \file apply.hpp
  \brief Committing a resubstitution candidate
*/

#pragma once

#include "../netlist.hpp"
#include "../partition.hpp"
#include "equiv_func.hpp"
#include "window.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sllopt
{

struct commit_report
{
  node_id old_node{ invalid_node };
  node_id new_node{ invalid_node };

  /*! \brief MFFC nodes removed besides the pivot, in removal order. */
  std::vector<node_id> removed;

  int64_t delta_sll_fo{ 0 };
  int64_t delta_luts{ 0 };
};

/*! \brief Replaces the pivot by a new LUT over the candidate support.
 *
 * The new node takes the pivot's name, die and sinks; the pivot and the
 * logic that only it used are removed.  Returns `std::nullopt` without
 * touching the netlist when a support signal lies in the pivot's TFO.
 * `level` must be current for `ntk`.
 */
inline std::optional<commit_report> apply_resubstitution( netlist& ntk, die_assignment& a,
                                                          std::vector<uint32_t> const& level,
                                                          resub_candidate const& c )
{
  {
    tfo_membership in_tfo( ntk, level, c.pivot );
    for ( auto s : c.support )
      if ( in_tfo( s ) )
        return std::nullopt;
  }

  auto const die = a.die( c.pivot );
  int64_t cross_before = cross_die_count( ntk.get( c.pivot ).fanins, a, die );
  auto const old_fanins = ntk.get( c.pivot ).fanins;
  auto const luts_before = static_cast<int64_t>( ntk.num_luts() );

  commit_report r;
  r.old_node = c.pivot;
  r.new_node = ntk.substitute( c.pivot, c.support, c.function );
  a.set( r.new_node, die, 1u );
  a.weight[c.pivot] = 0u;

  for ( auto f : old_fanins )
    for ( auto n : ntk.remove_dangling_cone( f ) )
    {
      cross_before += cross_die_count( ntk.get( n ).fanins, a, a.die( n ) );
      a.weight[n] = 0u;
      r.removed.push_back( n );
    }

  r.delta_sll_fo = static_cast<int64_t>( cross_die_count( c.support, a, die ) ) - cross_before;
  r.delta_luts = static_cast<int64_t>( ntk.num_luts() ) - luts_before;
  return r;
}

} /* namespace sllopt */
