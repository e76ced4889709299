/*!
  \file equiv_func.hpp
  \brief Existence check, interpolation and the per-pivot function search

  Every check works on exhaustive truth tables over the window PIs.  A
  support set S can express the pivot f on the care set C iff no two care
  minterms agree on S but disagree on f.  Minterms are grouped into classes
  by their valuation of S; the check fails iff some class meets both
  `C & f` and `C & ~f`.
*/

#pragma once

#include "../error.hpp"
#include "../netlist.hpp"
#include "../partition.hpp"
#include "../truth_table.hpp"
#include "care_set.hpp"
#include "divisors.hpp"
#include "window.hpp"

#include <optional>
#include <vector>

namespace sllopt
{

namespace detail
{

/* Non-empty classes of `domain` split by the valuations of `support`. */
inline std::vector<truth_table> split_classes( truth_table const& domain, std::vector<truth_table const*> const& support )
{
  std::vector<truth_table> classes;
  if ( !domain.is_const0() )
    classes.push_back( domain );
  for ( auto const* s : support )
  {
    std::vector<truth_table> next;
    for ( auto const& c : classes )
    {
      auto hi = c & *s;
      auto lo = and_not( c, *s );
      if ( !lo.is_const0() )
        next.push_back( std::move( lo ) );
      if ( !hi.is_const0() )
        next.push_back( std::move( hi ) );
    }
    classes = std::move( next );
  }
  return classes;
}

} /* namespace detail */

/*! \brief True iff `function` is a function of `support` on `care`. */
inline bool exist_check( truth_table const& function, truth_table const& care,
                         std::vector<truth_table const*> const& support )
{
  auto const on = care & function;
  for ( auto const& c : detail::split_classes( care, support ) )
    if ( intersects( c, on ) && intersects( c, and_not( care, function ) ) )
      return false;
  return true;
}

/*! \brief Table over `support` (variable i = support[i]) matching `function` on `care`.
 *
 * Support valuations not reached by any care minterm map to 0.
 */
inline truth_table interpolate( truth_table const& function, truth_table const& care,
                                std::vector<truth_table const*> const& support )
{
  if ( !exist_check( function, care, support ) )
    throw error( "interpolation requested for a support that cannot express the function" );
  auto const m = static_cast<uint32_t>( support.size() );
  truth_table result( m );
  auto const on = care & function;
  for ( uint64_t p = 0; p < result.num_bits(); ++p )
  {
    auto cls = on;
    for ( uint32_t i = 0; i < m && !cls.is_const0(); ++i )
      cls = ( ( p >> i ) & 1u ) ? ( cls & *support[i] ) : and_not( cls, *support[i] );
    if ( !cls.is_const0() )
      result.set_bit( p );
  }
  return result;
}

struct resub_candidate
{
  node_id pivot{ invalid_node };

  /*! \brief Cross-die fanin being eliminated. */
  node_id removed_fanin{ invalid_node };

  std::vector<node_id> support;
  truth_table function;
};

/*! \brief Number of `fanins` on a die other than `die`. */
inline uint32_t cross_die_count( std::vector<node_id> const& fanins, die_assignment const& a, uint32_t die )
{
  uint32_t n = 0;
  for ( auto f : fanins )
    n += a.die( f ) != die ? 1u : 0u;
  return n;
}

/*! \brief Cross-die fanin with the deepest driver; ties go to the lower fanin position. */
inline std::optional<node_id> select_cross_die_fanin( netlist const& ntk, std::vector<uint32_t> const& level,
                                                      die_assignment const& a, node_id pivot )
{
  std::optional<node_id> best;
  auto const die = a.die( pivot );
  for ( auto f : ntk.get( pivot ).fanins )
    if ( a.die( f ) != die && ( !best || level[f] > level[*best] ) )
      best = f;
  return best;
}

/*! \brief Searches a replacement for the pivot without fanin `u`.
 *
 * Tries `fanin(v) \ {u}` first, then that base extended by in-die divisors:
 * single divisors in divisor order, then pairs and so on up to
 * `max_augment`, never exceeding `k_max` inputs.
 */
inline std::optional<resub_candidate> find_equiv_func( netlist const& ntk, window_simulation const& sim,
                                                       node_id pivot, node_id u, divisor_set const& divisors,
                                                       truth_table const& care, uint32_t max_augment = 1u )
{
  auto const& fanins = ntk.get( pivot ).fanins;
  auto const& f = sim.value( pivot );

  std::vector<node_id> base;
  for ( auto x : fanins )
    if ( x != u )
      base.push_back( x );
  std::vector<truth_table const*> base_tts;
  for ( auto x : base )
    base_tts.push_back( &sim.value( x ) );

  auto make = [&]( std::vector<node_id> support, std::vector<truth_table const*> const& tts ) {
    resub_candidate c;
    c.pivot = pivot;
    c.removed_fanin = u;
    c.function = interpolate( f, care, tts );
    c.support = std::move( support );
    return c;
  };

  if ( exist_check( f, care, base_tts ) )
    return make( base, base_tts );

  std::vector<node_id> extra;
  for ( auto d : divisors.in_die )
    if ( std::find( fanins.begin(), fanins.end(), d ) == fanins.end() )
      extra.push_back( d );

  /* classes of the base that still mix on and off minterms */
  auto const on = care & f;
  auto const off = and_not( care, f );
  std::vector<std::pair<truth_table, truth_table>> conflicts;
  for ( auto const& c : detail::split_classes( care, base_tts ) )
    if ( intersects( c, on ) && intersects( c, off ) )
      conflicts.emplace_back( c & on, c & off );

  auto resolves = [&]( truth_table const& d ) {
    for ( auto const& [c_on, c_off] : conflicts )
    {
      if ( intersects( c_on, d ) && intersects( c_off, d ) )
        return false;
      if ( !and_not( c_on, d ).is_const0() && !and_not( c_off, d ).is_const0() )
        return false;
    }
    return true;
  };

  auto const k_max = ntk.k_max();
  for ( uint32_t a = 1; a <= max_augment && base.size() + a <= k_max && a <= extra.size(); ++a )
  {
    /* lexicographic index combinations of size a */
    std::vector<std::size_t> idx( a );
    for ( std::size_t i = 0; i < a; ++i )
      idx[i] = i;
    while ( true )
    {
      bool ok;
      if ( a == 1u )
        ok = resolves( sim.value( extra[idx[0]] ) );
      else
      {
        auto tts = base_tts;
        for ( auto i : idx )
          tts.push_back( &sim.value( extra[i] ) );
        ok = exist_check( f, care, tts );
      }
      if ( ok )
      {
        auto support = base;
        auto tts = base_tts;
        for ( auto i : idx )
        {
          support.push_back( extra[i] );
          tts.push_back( &sim.value( extra[i] ) );
        }
        return make( std::move( support ), tts );
      }
      std::size_t pos = a;
      while ( pos > 0u && idx[pos - 1u] == extra.size() - a + ( pos - 1u ) )
        --pos;
      if ( pos == 0u )
        break;
      ++idx[pos - 1u];
      for ( auto j = pos; j < a; ++j )
        idx[j] = idx[j - 1u] + 1u;
    }
  }
  return std::nullopt;
}

} /* namespace sllopt */
