/*!
  \file traversal.hpp
  \brief Topological order, levels, TFI/TFO and MFFC of a netlist
*/

#pragma once

#include "netlist.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace sllopt
{

inline constexpr uint32_t unbounded_depth = std::numeric_limits<uint32_t>::max();

/*! \brief Logic level of every live node; sources are level 0.
 *
 * Dead identifiers get level 0.  Throws `structure_error` on a
 * combinational cycle.
 */
inline std::vector<uint32_t> compute_levels( netlist const& ntk )
{
  std::vector<uint32_t> level( ntk.size(), 0u );
  std::vector<uint32_t> pending( ntk.size(), 0u );
  std::vector<node_id> ready;
  std::size_t live_luts = 0;
  ntk.foreach_node( [&]( node_id id ) {
    if ( ntk.kind( id ) == node_kind::lut )
    {
      ++live_luts;
      pending[id] = static_cast<uint32_t>( ntk.get( id ).fanins.size() );
      if ( pending[id] == 0u )
        ready.push_back( id );
    }
    else
    {
      ready.push_back( id );
    }
  } );

  std::size_t processed_luts = 0;
  while ( !ready.empty() )
  {
    auto const id = ready.back();
    ready.pop_back();
    if ( ntk.kind( id ) == node_kind::lut )
      ++processed_luts;
    for ( auto s : ntk.fanouts( id ) )
    {
      if ( ntk.kind( s ) != node_kind::lut )
        continue;
      level[s] = std::max( level[s], level[id] + 1u );
      if ( --pending[s] == 0u )
        ready.push_back( s );
    }
  }
  if ( processed_luts != live_luts )
    throw structure_error( "combinational cycle detected" );
  return level;
}

/*! \brief Live LUTs ordered by (level, id). */
inline std::vector<node_id> topological_order( netlist const& ntk, std::vector<uint32_t> const& level )
{
  std::vector<node_id> order;
  order.reserve( ntk.num_luts() );
  ntk.foreach_lut( [&]( node_id id ) { order.push_back( id ); } );
  std::stable_sort( order.begin(), order.end(), [&]( node_id a, node_id b ) { return level[a] < level[b]; } );
  return order;
}

inline std::vector<node_id> topological_order( netlist const& ntk )
{
  return topological_order( ntk, compute_levels( ntk ) );
}

/*! \brief Transitive fanin of `root` within `depth` hops, `root` excluded.
 *
 * Primary inputs and latch outputs are included when reached and are never
 * expanded.  The result is sorted by identifier.
 */
inline std::vector<node_id> tfi( netlist const& ntk, node_id root, uint32_t depth = unbounded_depth )
{
  if ( !ntk.is_alive( root ) )
    throw structure_error( "unknown node" );
  std::vector<uint8_t> seen( ntk.size(), 0u );
  std::vector<node_id> frontier{ root }, result;
  seen[root] = 1u;
  for ( uint32_t d = 0; d < depth && !frontier.empty(); ++d )
  {
    std::vector<node_id> next;
    for ( auto n : frontier )
    {
      if ( ntk.kind( n ) != node_kind::lut )
        continue;
      for ( auto f : ntk.get( n ).fanins )
        if ( !seen[f] )
        {
          seen[f] = 1u;
          result.push_back( f );
          next.push_back( f );
        }
    }
    frontier = std::move( next );
  }
  std::sort( result.begin(), result.end() );
  return result;
}

/*! \brief Transitive fanout of `root` within `depth` hops, `root` excluded.
 *
 * Only LUT sinks are followed; latch inputs terminate the traversal.
 */
inline std::vector<node_id> tfo( netlist const& ntk, node_id root, uint32_t depth = unbounded_depth )
{
  if ( !ntk.is_alive( root ) )
    throw structure_error( "unknown node" );
  std::vector<uint8_t> seen( ntk.size(), 0u );
  std::vector<node_id> frontier{ root }, result;
  seen[root] = 1u;
  for ( uint32_t d = 0; d < depth && !frontier.empty(); ++d )
  {
    std::vector<node_id> next;
    for ( auto n : frontier )
      for ( auto s : ntk.fanouts( n ) )
        if ( ntk.kind( s ) == node_kind::lut && !seen[s] )
        {
          seen[s] = 1u;
          result.push_back( s );
          next.push_back( s );
        }
    frontier = std::move( next );
  }
  std::sort( result.begin(), result.end() );
  return result;
}

/*! \brief Maximum fanout-free cone of a LUT, sorted by identifier.
 *
 * Computed by dereferencing: a fanin LUT joins the cone once every one of
 * its references (sinks and primary-output uses) comes from inside.
 */
inline std::vector<node_id> mffc( netlist const& ntk, node_id root )
{
  if ( !ntk.is_lut( root ) )
    throw structure_error( "MFFC requires a live LUT" );
  std::vector<uint32_t> refs( ntk.size(), 0u );
  std::vector<node_id> cone{ root }, stack{ root };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    for ( auto f : ntk.get( n ).fanins )
    {
      if ( ntk.kind( f ) != node_kind::lut || ntk.is_po( f ) )
        continue;
      if ( ++refs[f] == ntk.fanouts( f ).size() )
      {
        cone.push_back( f );
        stack.push_back( f );
      }
    }
  }
  std::sort( cone.begin(), cone.end() );
  return cone;
}

} /* namespace sllopt */
