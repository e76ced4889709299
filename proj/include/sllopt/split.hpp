/*!
  \file split.hpp
  \brief Per-die sub-netlists with SLL boundary pins, and their inverse

  A net driven on die s with sinks on die t != s becomes a buffer LUT
  `__sll_<net>_out` exported as a primary output of die s, and a primary
  input `__sll_<net>_in` of die t.  Original PI, PO and latch names are kept.
*/

#pragma once

#include "blif.hpp"
#include "error.hpp"
#include "netlist.hpp"
#include "partition.hpp"
#include "traversal.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

namespace sllopt
{

inline std::string sll_out_name( std::string const& net ) { return std::string( reserved_prefix ) + net + "_out"; }
inline std::string sll_in_name( std::string const& net ) { return std::string( reserved_prefix ) + net + "_in"; }

/*! \brief One netlist per die; die `d` is modeled as `<model>_die<d>`. */
inline std::vector<netlist> split_per_die( netlist const& ntk, die_assignment const& a )
{
  validate_assignment( ntk, a );
  ntk.foreach_node( [&]( node_id id ) {
    if ( ntk.name( id ).starts_with( reserved_prefix ) )
      throw error( "net '" + ntk.name( id ) + "' collides with the reserved prefix '" + std::string( reserved_prefix ) + "'" );
  } );

  auto const k = a.num_dies;
  auto const level = compute_levels( ntk );
  auto const order = topological_order( ntk, level );

  std::vector<netlist> dies;
  std::vector<std::unordered_map<node_id, node_id>> local( k );
  for ( uint32_t d = 0; d < k; ++d )
    dies.emplace_back( k == 1u ? ntk.model_name() : ntk.model_name() + "_die" + std::to_string( d ), ntk.k_max() );

  /* net `id` as seen from die d */
  auto signal = [&]( node_id id, uint32_t d ) { return local[d].at( id ); };

  for ( auto pi : ntk.pis() )
    local[a.die( pi )][pi] = dies[a.die( pi )].add_pi( ntk.name( pi ) );

  /* imports in driver (level, id) order */
  std::vector<node_id> drivers;
  ntk.foreach_node( [&]( node_id id ) { drivers.push_back( id ); } );
  std::stable_sort( drivers.begin(), drivers.end(), [&]( node_id x, node_id y ) { return level[x] < level[y]; } );
  std::vector<std::vector<uint32_t>> dest_dies( ntk.size() );
  for ( auto id : drivers )
  {
    std::vector<uint8_t> seen( k, 0u );
    for ( auto s : ntk.fanouts( id ) )
    {
      auto const t = a.die( s );
      if ( t != a.die( id ) && !seen[t] )
      {
        seen[t] = 1u;
        dest_dies[id].push_back( t );
      }
    }
    for ( auto t : dest_dies[id] )
      local[t][id] = dies[t].add_pi( sll_in_name( ntk.name( id ) ) );
  }

  for ( auto l : ntk.latches() )
  {
    auto const& li = ntk.get( l ).latch;
    local[a.die( l )][l] = dies[a.die( l )].add_latch( ntk.name( l ), invalid_node, li.init, li.type, li.control );
  }
  for ( auto id : order )
  {
    auto const d = a.die( id );
    std::vector<node_id> fanins;
    for ( auto f : ntk.get( id ).fanins )
      fanins.push_back( signal( f, d ) );
    local[d][id] = dies[d].add_lut( ntk.name( id ), std::move( fanins ), ntk.get( id ).function );
  }
  for ( auto l : ntk.latches() )
    dies[a.die( l )].set_latch_input( local[a.die( l )].at( l ), signal( ntk.get( l ).latch.input, a.die( l ) ) );

  for ( auto po : ntk.pos() )
    dies[a.die( po )].add_po( signal( po, a.die( po ) ) );
  for ( auto id : drivers )
    if ( !dest_dies[id].empty() )
    {
      auto const s = a.die( id );
      auto const buf = dies[s].add_lut( sll_out_name( ntk.name( id ) ), { signal( id, s ) },
                                        truth_table::nth_var( 1u, 0u ) );
      dies[s].add_po( buf );
    }
  return dies;
}

/*! \brief Reconnects SLL pins of per-die netlists into one netlist named `model`. */
inline netlist stitch( std::vector<netlist> const& dies, std::string model )
{
  uint32_t k_max = 0;
  for ( auto const& d : dies )
    k_max = std::max( k_max, d.k_max() );
  netlist out( std::move( model ), std::max( k_max, 1u ) );

  /* rebuild through BLIF-level names: all per-die names are globally unique */
  std::unordered_map<std::string, node_id> net;
  for ( auto const& d : dies )
    for ( auto pi : d.pis() )
      if ( !d.name( pi ).starts_with( reserved_prefix ) )
        net[d.name( pi )] = out.add_pi( d.name( pi ) );

  auto source_name = []( netlist const& d, node_id f ) {
    auto name = d.name( f );
    if ( d.is_pi( f ) && name.starts_with( reserved_prefix ) )
      name = sll_out_name( name.substr( reserved_prefix.size(), name.size() - reserved_prefix.size() - 3u ) );
    return name;
  };

  /* Kahn's algorithm over the LUTs of all dies, linked by name */
  struct entry
  {
    std::size_t die;
    node_id id;
    std::vector<std::string> fanins;
  };
  std::vector<entry> entries;
  std::unordered_map<std::string, std::size_t> entry_of;
  for ( std::size_t i = 0; i < dies.size(); ++i )
  {
    auto const& d = dies[i];
    for ( auto l : d.latches() )
    {
      auto const& li = d.get( l ).latch;
      net[d.name( l )] = out.add_latch( d.name( l ), invalid_node, li.init, li.type, li.control );
    }
    for ( auto id : topological_order( d ) )
    {
      entry e{ i, id, {} };
      for ( auto f : d.get( id ).fanins )
        e.fanins.push_back( source_name( d, f ) );
      entry_of[d.name( id )] = entries.size();
      entries.push_back( std::move( e ) );
    }
  }
  std::vector<uint32_t> pending( entries.size(), 0u );
  std::vector<std::vector<std::size_t>> users( entries.size() );
  std::vector<std::size_t> ready;
  for ( std::size_t e = 0; e < entries.size(); ++e )
  {
    for ( auto const& f : entries[e].fanins )
      if ( auto it = entry_of.find( f ); it != entry_of.end() )
      {
        ++pending[e];
        users[it->second].push_back( e );
      }
    if ( pending[e] == 0u )
      ready.push_back( e );
  }
  std::reverse( ready.begin(), ready.end() );
  std::size_t placed = 0;
  while ( !ready.empty() )
  {
    auto const e = ready.back();
    ready.pop_back();
    auto const& d = dies[entries[e].die];
    std::vector<node_id> fanins;
    for ( auto const& f : entries[e].fanins )
    {
      auto it = net.find( f );
      if ( it == net.end() )
        throw error( "cannot stitch: net '" + f + "' has no driver" );
      fanins.push_back( it->second );
    }
    net[d.name( entries[e].id )] = out.add_lut( d.name( entries[e].id ), std::move( fanins ), d.get( entries[e].id ).function );
    ++placed;
    for ( auto user : users[e] )
      if ( --pending[user] == 0u )
        ready.push_back( user );
  }
  if ( placed != entries.size() )
    throw error( "cannot stitch: SLL pins form a combinational cycle" );

  for ( auto const& d : dies )
  {
    for ( auto l : d.latches() )
    {
      out.set_latch_input( net.at( d.name( l ) ), net.at( source_name( d, d.get( l ).latch.input ) ) );
    }
    for ( auto po : d.pos() )
      if ( !d.name( po ).starts_with( reserved_prefix ) )
        out.add_po( net.at( d.name( po ) ) );
  }
  return out;
}

} /* namespace sllopt */
