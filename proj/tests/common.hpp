#pragma once

#include <sllopt/blif.hpp>
#include <sllopt/netlist.hpp>
#include <sllopt/partition.hpp>
#include <sllopt/truth_table.hpp>

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace sllopt::test
{

inline std::string data_path( std::string const& rel ) { return std::string( SLLOPT_DATA_DIR ) + "/" + rel; }

inline truth_table xor2() { return truth_table::from_binary( "0110" ); }

/* X = a^b, Y = X^c, F = a^d; POs Y, F */
inline netlist worked_example()
{
  netlist ntk( "example" );
  auto a = ntk.add_pi( "a" );
  auto b = ntk.add_pi( "b" );
  auto c = ntk.add_pi( "c" );
  auto d = ntk.add_pi( "d" );
  auto x = ntk.add_lut( "X", { a, b }, xor2() );
  auto y = ntk.add_lut( "Y", { x, c }, xor2() );
  auto f = ntk.add_lut( "F", { a, d }, xor2() );
  ntk.add_po( y );
  ntk.add_po( f );
  return ntk;
}

/* a, b, X on die 0; c, d, Y, F on die 1 */
inline die_assignment worked_example_dies( netlist const& ntk )
{
  die_assignment a;
  a.num_dies = 2;
  ntk.foreach_node( [&]( node_id id ) {
    auto const& n = ntk.name( id );
    a.set( id, ( n == "a" || n == "b" || n == "X" ) ? 0u : 1u, logic_weight( ntk, id ) );
  } );
  return a;
}

inline netlist care_b_eq_c()
{
  netlist p( "care" );
  auto b = p.add_pi( "b" );
  auto c = p.add_pi( "c" );
  p.add_po( p.add_lut( "care", { b, c }, truth_table::from_binary( "1001" ) ) );
  return p;
}

struct random_netlist_params
{
  uint32_t pis{ 6 };
  uint32_t luts{ 20 };
  uint32_t k{ 4 };
  uint32_t pos{ 4 };
  uint32_t latches{ 0 };
  /* fanins are drawn from the most recent `locality` signals when nonzero */
  uint32_t locality{ 0 };
};

inline netlist random_netlist( std::mt19937_64& rng, random_netlist_params const& ps )
{
  netlist ntk( "rnd", std::max( ps.k, 1u ) );
  std::vector<node_id> signals;
  for ( uint32_t i = 0; i < ps.pis; ++i )
    signals.push_back( ntk.add_pi( "i" + std::to_string( i ) ) );
  std::vector<node_id> latches;
  for ( uint32_t i = 0; i < ps.latches; ++i )
  {
    latches.push_back( ntk.add_latch( "q" + std::to_string( i ), invalid_node, latch_init::zero ) );
    signals.push_back( latches.back() );
  }
  for ( uint32_t i = 0; i < ps.luts; ++i )
  {
    auto const lo = ps.locality && signals.size() > ps.locality ? signals.size() - ps.locality : 0u;
    auto const avail = static_cast<uint32_t>( signals.size() - lo );
    auto const arity = std::min<uint32_t>( 1u + static_cast<uint32_t>( rng() % ps.k ), avail );
    std::vector<node_id> fanins;
    while ( fanins.size() < arity )
    {
      auto s = signals[lo + rng() % avail];
      if ( std::find( fanins.begin(), fanins.end(), s ) == fanins.end() )
        fanins.push_back( s );
    }
    truth_table fn( arity );
    for ( uint64_t m = 0; m < fn.num_bits(); ++m )
      fn.set_bit( m, rng() & 1u );
    signals.push_back( ntk.add_lut( "n" + std::to_string( i ), std::move( fanins ), std::move( fn ) ) );
  }
  std::vector<node_id> luts;
  ntk.foreach_lut( [&]( node_id id ) { luts.push_back( id ); } );
  for ( auto l : latches )
    ntk.set_latch_input( l, luts.empty() ? signals[0] : luts[rng() % luts.size()] );
  /* the last LUTs become outputs so that most logic is observable */
  for ( uint32_t i = 0; i < ps.pos && i < luts.size(); ++i )
    ntk.add_po( luts[luts.size() - 1u - i] );
  return ntk;
}

inline die_assignment random_assignment( netlist const& ntk, std::mt19937_64& rng, uint32_t k )
{
  die_assignment a;
  a.num_dies = k;
  a.die_of.assign( ntk.size(), 0u );
  a.weight.assign( ntk.size(), 0u );
  ntk.foreach_node( [&]( node_id id ) { a.set( id, static_cast<uint32_t>( rng() % k ), logic_weight( ntk, id ) ); } );
  return a;
}

} /* namespace sllopt::test */
