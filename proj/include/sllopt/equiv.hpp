/*!
  \file equiv.hpp
  \brief Simulation-based combinational equivalence checking

  Netlists are compared over their combinational interfaces, matched by
  name: primary inputs and latch outputs on one side, primary outputs and
  latch inputs on the other.  Exhaustive mode enumerates every input
  assignment.  Random mode draws seeded uniform vectors; a mismatch region
  of density p escapes N vectors with probability (1 - p)^N.
*/

#pragma once

#include "error.hpp"
#include "netlist.hpp"
#include "resynth/care_set.hpp"
#include "simulation.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sllopt
{

enum class equiv_mode
{
  automatic,
  exhaustive,
  random
};

struct equiv_params
{
  equiv_mode mode{ equiv_mode::automatic };

  /*! \brief Largest input count for exhaustive enumeration. */
  uint32_t exhaustive_limit{ 18u };

  uint64_t random_vectors{ 100000u };
  uint64_t seed{ 1u };

  /*! \brief Only assignments satisfying this predicate are compared. */
  care_predicate const* care{ nullptr };

  /*! \brief Keeps every mismatching assignment instead of stopping at the first. */
  bool collect_all{ false };
};

struct counterexample
{
  /*! \brief Input values in the interface order of the first netlist. */
  std::vector<std::pair<std::string, bool>> inputs;
  std::string output;
};

struct equiv_verdict
{
  equiv_mode mode{ equiv_mode::exhaustive };
  uint64_t vectors_checked{ 0u };
  std::optional<counterexample> cex;

  /*! \brief Filled only with `collect_all`: every mismatching assignment as an index, bit i = input i. */
  std::vector<uint64_t> mismatches;

  bool equivalent() const { return !cex; }
};

namespace detail
{

struct miter
{
  netlist const& a;
  netlist const& b;
  sim_interface ia, ib;
  std::vector<std::size_t> b_input_of;  /* a-input index -> b-input index */
  std::vector<std::size_t> b_output_of; /* a-output index -> b-output index */
  std::vector<std::size_t> care_input_of;

  miter( netlist const& x, netlist const& y, care_predicate const* care )
      : a( x ), b( y ), ia( simulation_interface( x ) ), ib( simulation_interface( y ) )
  {
    b_input_of = match( ia.input_names, ib.input_names, "input" );
    b_output_of = match( ia.output_names, ib.output_names, "output" );
    if ( care )
    {
      auto const ic = simulation_interface( care->circuit );
      std::unordered_map<std::string, std::size_t> pos;
      for ( std::size_t i = 0; i < ia.input_names.size(); ++i )
        pos.emplace( ia.input_names[i], i );
      for ( auto const& n : ic.input_names )
      {
        auto it = pos.find( n );
        if ( it == pos.end() )
          throw error( "care predicate input '" + n + "' is not a netlist input" );
        care_input_of.push_back( it->second );
      }
    }
  }

  static std::vector<std::size_t> match( std::vector<std::string> const& x, std::vector<std::string> const& y,
                                         char const* what )
  {
    if ( x.size() != y.size() )
      throw error( std::string( "interface mismatch: " ) + std::to_string( x.size() ) + " vs " +
                   std::to_string( y.size() ) + " " + what + "s" );
    std::unordered_map<std::string, std::size_t> pos;
    for ( std::size_t i = 0; i < y.size(); ++i )
      pos.emplace( y[i], i );
    std::vector<std::size_t> m;
    for ( auto const& n : x )
    {
      auto it = pos.find( n );
      if ( it == pos.end() )
        throw error( std::string( "interface mismatch: " ) + what + " '" + n + "' missing in second netlist" );
      m.push_back( it->second );
    }
    return m;
  }
};

/* Per-word mismatch masks and the first differing output per pattern. */
class miter_simulator
{
public:
  miter_simulator( miter const& m, care_predicate const* care ) : m_( m ), sa_( m.a ), sb_( m.b ), care_( care )
  {
    if ( care_ )
      sc_.emplace( care_->circuit );
  }

  /* input words: words per a-input; returns admitted and differing masks */
  void run( std::vector<uint64_t> const& in_a, std::size_t words, std::vector<uint64_t>& admitted,
            std::vector<uint64_t>& differ )
  {
    auto const ni = m_.ia.inputs.size();
    std::vector<uint64_t> in_b( in_a.size() );
    for ( std::size_t i = 0; i < ni; ++i )
      std::copy_n( in_a.begin() + i * words, words, in_b.begin() + m_.b_input_of[i] * words );
    sa_.run( in_a, words );
    sb_.run( in_b, words );
    admitted.assign( words, ~uint64_t{ 0 } );
    if ( sc_ )
    {
      std::vector<uint64_t> in_c( m_.care_input_of.size() * words );
      for ( std::size_t i = 0; i < m_.care_input_of.size(); ++i )
        std::copy_n( in_a.begin() + m_.care_input_of[i] * words, words, in_c.begin() + i * words );
      sc_->run( in_c, words );
      auto const c = sc_->output( 0 );
      for ( std::size_t w = 0; w < words; ++w )
        admitted[w] = c[w];
    }
    differ.assign( words, 0u );
    for ( std::size_t o = 0; o < m_.ia.outputs.size(); ++o )
    {
      auto const va = sa_.output( o );
      auto const vb = sb_.output( m_.b_output_of[o] );
      for ( std::size_t w = 0; w < words; ++w )
        differ[w] |= ( va[w] ^ vb[w] );
    }
    for ( std::size_t w = 0; w < words; ++w )
      differ[w] &= admitted[w];
  }

  /* first differing output for one assignment, or -1 */
  int differing_output( std::vector<bool> const& assignment )
  {
    std::vector<uint64_t> in( assignment.size() );
    for ( std::size_t i = 0; i < assignment.size(); ++i )
      in[i] = assignment[i] ? 1u : 0u;
    std::vector<uint64_t> adm, diff;
    run( in, 1u, adm, diff );
    if ( !( diff[0] & 1u ) )
      return -1;
    for ( std::size_t o = 0; o < m_.ia.outputs.size(); ++o )
      if ( ( sa_.output( o )[0] ^ sb_.output( m_.b_output_of[o] )[0] ) & 1u )
        return static_cast<int>( o );
    return -1;
  }

private:
  miter const& m_;
  block_simulator sa_, sb_;
  care_predicate const* care_;
  std::optional<block_simulator> sc_;
};

inline counterexample make_cex( miter const& m, miter_simulator& sim, std::vector<bool> bits )
{
  /* greedy minimization: clear set bits while the mismatch persists */
  for ( std::size_t i = 0; i < bits.size(); ++i )
  {
    if ( !bits[i] )
      continue;
    bits[i] = false;
    if ( sim.differing_output( bits ) < 0 )
      bits[i] = true;
  }
  counterexample c;
  for ( std::size_t i = 0; i < bits.size(); ++i )
    c.inputs.emplace_back( m.ia.input_names[i], bits[i] );
  c.output = m.ia.output_names.at( static_cast<std::size_t>( sim.differing_output( bits ) ) );
  return c;
}

} /* namespace detail */

/*! \brief Compares two netlists by simulation.
 *
 * The first mismatch in enumeration or draw order becomes the
 * counterexample, then bits are greedily cleared while it persists.
 */
inline equiv_verdict check_equivalence( netlist const& a, netlist const& b, equiv_params const& ps = {} )
{
  detail::miter m( a, b, ps.care );
  detail::miter_simulator sim( m, ps.care );
  auto const n = m.ia.inputs.size();

  equiv_verdict v;
  v.mode = ps.mode;
  if ( v.mode == equiv_mode::automatic )
    v.mode = n <= ps.exhaustive_limit ? equiv_mode::exhaustive : equiv_mode::random;
  if ( v.mode == equiv_mode::exhaustive && n > ps.exhaustive_limit )
    throw error( "exhaustive check requested for " + std::to_string( n ) + " inputs, above the limit of " +
                 std::to_string( ps.exhaustive_limit ) );
  if ( ps.collect_all && v.mode != equiv_mode::exhaustive )
    throw error( "collecting all mismatches requires exhaustive mode" );

  uint64_t const total = v.mode == equiv_mode::exhaustive ? ( uint64_t{ 1 } << n ) : ps.random_vectors;
  std::size_t const chunk_words = 256u;
  std::mt19937_64 rng( ps.seed );
  std::vector<uint64_t> in, admitted, differ;

  for ( uint64_t start = 0; start < total; start += chunk_words * 64u )
  {
    auto const patterns = std::min<uint64_t>( total - start, chunk_words * 64u );
    auto const words = static_cast<std::size_t>( ( patterns + 63u ) / 64u );
    in.assign( n * words, 0u );
    for ( std::size_t i = 0; i < n; ++i )
      for ( std::size_t w = 0; w < words; ++w )
      {
        uint64_t word;
        if ( v.mode == equiv_mode::random )
          word = rng();
        else if ( i < 6u )
          word = truth_table::nth_var( 6u, static_cast<uint32_t>( i ) ).words()[0];
        else
          word = ( ( ( start + w * 64u ) >> i ) & 1u ) ? ~uint64_t{ 0 } : 0u;
        in[i * words + w] = word;
      }
    sim.run( in, words, admitted, differ );

    for ( std::size_t w = 0; w < words; ++w )
    {
      auto const valid = ( w + 1u == words && patterns % 64u ) ? ( ( uint64_t{ 1 } << ( patterns % 64u ) ) - 1u )
                                                               : ~uint64_t{ 0 };
      v.vectors_checked += static_cast<uint64_t>( std::popcount( admitted[w] & valid ) );
      auto bad = differ[w] & valid;
      while ( bad )
      {
        auto const bit = static_cast<std::size_t>( std::countr_zero( bad ) );
        bad &= bad - 1u;
        std::vector<bool> bits( n );
        uint64_t index = 0;
        for ( std::size_t i = 0; i < n; ++i )
        {
          bits[i] = ( in[i * words + w] >> bit ) & 1u;
          index |= static_cast<uint64_t>( bits[i] ) << ( i < 64u ? i : 0u );
        }
        if ( !v.cex )
          v.cex = detail::make_cex( m, sim, bits );
        if ( !ps.collect_all )
          return v;
        v.mismatches.push_back( index );
      }
    }
  }
  return v;
}

} /* namespace sllopt */
