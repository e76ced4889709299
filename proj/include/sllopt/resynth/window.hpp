/*!
  \file window.hpp
  \brief Bounded sub-circuit around a pivot

  A window is built from the pivot's TFO up to `d1` levels and its TFI up
  to `d2` levels.  Fanins of collected nodes that are not collected become
  window PIs.  Nodes reachable from TFI signals through at most `d1` fanout
  hops are then added while the PI cap holds, so that logic shared with the
  pivot's cone becomes available as divisors.

  Soundness rests on two invariants: no window PI depends on the pivot, and
  every window node whose value escapes the window is a window output.
*/

#pragma once

#include "../netlist.hpp"
#include "../traversal.hpp"
#include "params.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace sllopt
{

struct window
{
  node_id pivot{ invalid_node };

  /*! \brief Ordered by (level, id); index i is truth-table variable i. */
  std::vector<node_id> pis;

  /*! \brief LUTs ordered by (level, id); contains the pivot. */
  std::vector<node_id> nodes;

  /*! \brief Window nodes with a sink outside the window, a PO or a latch sink. */
  std::vector<node_id> outputs;

  /*! \brief Window nodes in the pivot's TFO, ordered like `nodes`. */
  std::vector<node_id> tfo;

  /*! \brief Pivot TFI signals inside the window (LUTs and PIs). */
  std::vector<node_id> tfi;

  uint32_t d1{ 0u };
  uint32_t d2{ 0u };

  bool contains( node_id n ) const
  {
    return std::find( nodes.begin(), nodes.end(), n ) != nodes.end() ||
           std::find( pis.begin(), pis.end(), n ) != pis.end();
  }

  /*! \brief Position of `n` in `pis`, or -1. */
  int pi_index( node_id n ) const
  {
    auto it = std::find( pis.begin(), pis.end(), n );
    return it == pis.end() ? -1 : static_cast<int>( it - pis.begin() );
  }
};

/*! \brief Answers "is `n` in the TFO of `root`" with memoized backward search.
 *
 * Only nodes with a level above the root's can depend on it.
 */
class tfo_membership
{
public:
  tfo_membership( netlist const& ntk, std::vector<uint32_t> const& level, node_id root )
      : ntk_( ntk ), level_( level ), root_( root )
  {
  }

  bool operator()( node_id n )
  {
    if ( n == root_ )
      return true;
    if ( !ntk_.is_lut( n ) || level_[n] <= level_[root_] )
      return false;
    if ( auto it = memo_.find( n ); it != memo_.end() )
      return it->second;
    bool dep = false;
    for ( auto f : ntk_.get( n ).fanins )
      if ( ( *this )( f ) )
      {
        dep = true;
        break;
      }
    memo_[n] = dep;
    return dep;
  }

private:
  netlist const& ntk_;
  std::vector<uint32_t> const& level_;
  node_id root_;
  std::unordered_map<node_id, bool> memo_;
};

namespace detail
{

inline void sort_by_level( std::vector<node_id>& v, std::vector<uint32_t> const& level )
{
  std::sort( v.begin(), v.end(), [&]( node_id a, node_id b ) {
    return level[a] != level[b] ? level[a] < level[b] : a < b;
  } );
}

/* Number of non-empty BFS layers in a direction, up to `limit`. */
inline uint32_t reachable_depth( netlist const& ntk, node_id root, uint32_t limit, bool forward )
{
  std::vector<node_id> frontier{ root };
  std::vector<uint8_t> seen( ntk.size(), 0u );
  seen[root] = 1u;
  uint32_t depth = 0;
  while ( depth < limit && !frontier.empty() )
  {
    std::vector<node_id> next;
    for ( auto n : frontier )
    {
      if ( forward )
      {
        for ( auto s : ntk.fanouts( n ) )
          if ( ntk.is_lut( s ) && !seen[s] )
          {
            seen[s] = 1u;
            next.push_back( s );
          }
      }
      else if ( ntk.is_lut( n ) )
      {
        for ( auto f : ntk.get( n ).fanins )
          if ( !seen[f] )
          {
            seen[f] = 1u;
            next.push_back( f );
          }
      }
    }
    if ( next.empty() )
      break;
    ++depth;
    frontier = std::move( next );
  }
  return depth;
}

class window_builder
{
public:
  window_builder( netlist const& ntk, std::vector<uint32_t> const& level, node_id pivot, resynth_params const& ps )
      : ntk_( ntk ), level_( level ), pivot_( pivot ), ps_( ps ), in_tfo_( ntk, level, pivot ),
        mark_( ntk.size(), 0u )
  {
  }

  std::optional<window> build( uint32_t d1, uint32_t d2 )
  {
    std::fill( mark_.begin(), mark_.end(), 0u );
    window w;
    w.pivot = pivot_;
    w.d1 = d1;
    w.d2 = d2;

    auto tfo_nodes = sllopt::tfo( ntk_, pivot_, d1 );
    auto tfi_nodes = sllopt::tfi( ntk_, pivot_, d2 );

    /* TFO nodes needing a fanin that depends on the pivot but lies outside are dropped with their TFO */
    std::vector<uint8_t> in_t( ntk_.size(), 0u );
    in_t[pivot_] = 1u;
    detail::sort_by_level( tfo_nodes, level_ );
    for ( auto n : tfo_nodes )
    {
      bool ok = true;
      for ( auto f : ntk_.get( n ).fanins )
        if ( !in_t[f] && in_tfo_( f ) )
        {
          ok = false;
          break;
        }
      if ( ok )
        in_t[n] = 1u;
    }

    add_node( pivot_, w );
    for ( auto n : tfo_nodes )
      if ( in_t[n] )
      {
        add_node( n, w );
        w.tfo.push_back( n );
      }
    for ( auto n : tfi_nodes )
    {
      w.tfi.push_back( n );
      if ( ntk_.is_lut( n ) )
        add_node( n, w );
    }

    collect_pis( w );
    if ( w.pis.size() > ps_.window_pi_cap )
      return std::nullopt;

    add_siblings( w, ps_.d1 );

    detail::sort_by_level( w.nodes, level_ );
    detail::sort_by_level( w.pis, level_ );
    detail::sort_by_level( w.tfo, level_ );
    for ( auto n : w.nodes )
    {
      bool escapes = ntk_.is_po( n );
      for ( auto s : ntk_.fanouts( n ) )
        if ( mark_[s] != node_mark )
        {
          escapes = true;
          break;
        }
      if ( escapes )
        w.outputs.push_back( n );
    }
    return w;
  }

private:
  static constexpr uint8_t node_mark = 1u;
  static constexpr uint8_t pi_mark = 2u;

  void add_node( node_id n, window& w )
  {
    if ( mark_[n] == node_mark )
      return;
    mark_[n] = node_mark;
    w.nodes.push_back( n );
  }

  /* constant LUTs join as nodes; every other outside fanin becomes a window PI */
  void admit_fanin( node_id f, window& w )
  {
    if ( mark_[f] != 0u )
      return;
    if ( ntk_.is_lut( f ) && ntk_.get( f ).fanins.empty() )
      add_node( f, w );
    else
    {
      mark_[f] = pi_mark;
      w.pis.push_back( f );
    }
  }

  void collect_pis( window& w )
  {
    for ( std::size_t i = 0; i < w.nodes.size(); ++i )
      for ( auto f : ntk_.get( w.nodes[i] ).fanins )
        admit_fanin( f, w );
  }

  /* Fanout-reachable nodes from TFI signals, at most `hops` hops, outside the pivot's TFO; the PI cap always holds. */
  void add_siblings( window& w, uint32_t hops )
  {
    std::vector<node_id> frontier = w.tfi;
    frontier.insert( frontier.end(), w.pis.begin(), w.pis.end() );
    detail::sort_by_level( frontier, level_ );
    frontier.erase( std::unique( frontier.begin(), frontier.end() ), frontier.end() );
    uint32_t added = 0;
    for ( uint32_t hop = 0; hop < hops && !frontier.empty(); ++hop )
    {
      std::vector<node_id> candidates;
      for ( auto n : frontier )
        for ( auto s : ntk_.fanouts( n ) )
          if ( ntk_.is_lut( s ) && mark_[s] != node_mark )
            candidates.push_back( s );
      detail::sort_by_level( candidates, level_ );
      candidates.erase( std::unique( candidates.begin(), candidates.end() ), candidates.end() );

      std::vector<node_id> next;
      for ( auto s : candidates )
      {
        if ( added >= ps_.divisor_cap )
          return;
        if ( mark_[s] == node_mark || in_tfo_( s ) )
          continue;
        std::size_t missing = 0;
        for ( auto f : ntk_.get( s ).fanins )
          missing += mark_[f] == 0u ? 1u : 0u;
        if ( w.pis.size() + missing > ps_.window_pi_cap )
          continue;
        /* missing fanins cannot depend on the pivot since s does not */
        for ( auto f : ntk_.get( s ).fanins )
          admit_fanin( f, w );
        if ( mark_[s] == pi_mark )
          w.pis.erase( std::find( w.pis.begin(), w.pis.end(), s ) );
        mark_[s] = node_mark;
        w.nodes.push_back( s );
        next.push_back( s );
        ++added;
      }
      frontier = std::move( next );
    }
  }

  netlist const& ntk_;
  std::vector<uint32_t> const& level_;
  node_id pivot_;
  resynth_params const& ps_;
  tfo_membership in_tfo_;
  std::vector<uint8_t> mark_;
};

} /* namespace detail */

/*! \brief Builds the window of a LUT pivot, shrinking depths until the PI cap holds.
 *
 * `d2` is decremented first, down to 1; then `d1` is decremented and `d2`
 * restarts.  Returns `std::nullopt` when no depth pair satisfies the cap.
 */
inline std::optional<window> build_window( netlist const& ntk, std::vector<uint32_t> const& level, node_id pivot,
                                           resynth_params const& ps )
{
  if ( !ntk.is_lut( pivot ) )
    throw structure_error( "window pivot must be a live LUT" );
  auto const d1_max = detail::reachable_depth( ntk, pivot, ps.d1, true );
  auto const d2_max = std::max( 1u, detail::reachable_depth( ntk, pivot, ps.d2, false ) );
  detail::window_builder builder( ntk, level, pivot, ps );
  for ( uint32_t d1 = d1_max + 1u; d1-- > 0u; )
    for ( uint32_t d2 = d2_max; d2 >= 1u; --d2 )
      if ( auto w = builder.build( d1, d2 ) )
        return w;
  return std::nullopt;
}

inline std::optional<window> build_window( netlist const& ntk, node_id pivot, resynth_params const& ps )
{
  return build_window( ntk, compute_levels( ntk ), pivot, ps );
}

} /* namespace sllopt */
