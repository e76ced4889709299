/*!
  \file metrics.hpp
  \brief Inter-die connection counts and bounding-box wirelength costs

  A net consists of its driver and its LUT and latch sinks.  Primary
  outputs are not terminals.  Dies are stacked vertically: die `d` occupies
  rows `[d * H, (d + 1) * H)` in global coordinates, where the y coordinate
  of a placed block is local to its die.
*/

#pragma once

#include "error.hpp"
#include "netlist.hpp"
#include "partition.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace sllopt
{

enum class sll_count_mode
{
  per_destination_die,
  raw_net
};

/*! \brief SLL channels: one per (net, destination die) pair, or one per cut net in raw mode. */
inline uint64_t count_sll( netlist const& ntk, die_assignment const& a,
                           sll_count_mode mode = sll_count_mode::per_destination_die )
{
  validate_assignment( ntk, a );
  uint64_t count = 0;
  std::vector<uint32_t> seen( a.num_dies, invalid_node );
  ntk.foreach_node( [&]( node_id id ) {
    auto const d = a.die( id );
    for ( auto s : ntk.fanouts( id ) )
    {
      auto const sd = a.die( s );
      if ( sd == d || seen[sd] == id )
        continue;
      seen[sd] = id;
      ++count;
      if ( mode == sll_count_mode::raw_net )
        break;
    }
  } );
  return count;
}

/*! \brief Number of driver-to-sink edges whose endpoints lie on different dies. */
inline uint64_t count_sll_fo( netlist const& ntk, die_assignment const& a )
{
  validate_assignment( ntk, a );
  uint64_t count = 0;
  ntk.foreach_node( [&]( node_id id ) {
    for ( auto s : ntk.fanouts( id ) )
      count += a.die( s ) != a.die( id ) ? 1u : 0u;
  } );
  return count;
}

struct placed_block
{
  double x{ 0.0 };
  double y{ 0.0 };
  uint32_t die{ 0u };
};

struct placement
{
  std::unordered_map<std::string, placed_block> blocks;
  double die_width{ 0.0 };
  double die_height{ 0.0 };
  double l_sll{ 1.0 };

  /*! \brief Weight by terminal count; counts beyond the table use 1.0. */
  std::map<uint32_t, double> q_table;

  double q( uint32_t terminals ) const
  {
    auto it = q_table.find( terminals );
    return it == q_table.end() ? 1.0 : it->second;
  }

  placed_block const& at( std::string const& name ) const
  {
    auto it = blocks.find( name );
    if ( it == blocks.end() )
      throw error( "block '" + name + "' is not placed" );
    return it->second;
  }
};

/*! \brief Reads `<block> <x> <y> <die>` lines and checks them against the die geometry. */
inline placement read_placement( std::istream& in, double die_width, double die_height, double l_sll )
{
  if ( l_sll <= 0.0 )
    throw error( "interposer link length must be positive" );
  placement p;
  p.die_width = die_width;
  p.die_height = die_height;
  p.l_sll = l_sll;
  std::string raw;
  std::size_t line = 0;
  while ( std::getline( in, raw ) )
  {
    ++line;
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    std::istringstream ss( raw );
    std::string name, extra;
    placed_block b;
    if ( !( ss >> name ) )
      continue;
    if ( !( ss >> b.x >> b.y >> b.die ) || ( ss >> extra ) )
      throw parse_error( line, "expected '<block> <x> <y> <die>'" );
    if ( b.x < 0.0 || b.y < 0.0 || b.x > die_width || b.y > die_height )
      throw parse_error( line, "block '" + name + "' lies outside its die" );
    if ( !p.blocks.emplace( name, b ).second )
      throw parse_error( line, "duplicate block '" + name + "'" );
  }
  return p;
}

inline placement load_placement( std::string const& path, double die_width, double die_height, double l_sll )
{
  std::ifstream in( path );
  if ( !in )
    throw error( "cannot open '" + path + "'" );
  return read_placement( in, die_width, die_height, l_sll );
}

/*! \brief Reads `<terminal count> <factor>` lines. */
inline std::map<uint32_t, double> read_q_table( std::istream& in )
{
  std::map<uint32_t, double> q;
  std::string raw;
  std::size_t line = 0;
  while ( std::getline( in, raw ) )
  {
    ++line;
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    std::istringstream ss( raw );
    uint32_t n;
    double f;
    if ( !( ss >> n ) )
      continue;
    if ( !( ss >> f ) )
      throw parse_error( line, "expected '<terminals> <factor>'" );
    q[n] = f;
  }
  return q;
}

struct point
{
  double x, y;
};

/*! \brief Half-perimeter of the bounding box of `pts` (0 for fewer than two points). */
inline double hpwl( std::vector<point> const& pts )
{
  if ( pts.size() < 2u )
    return 0.0;
  auto [xmin, xmax] = std::minmax_element( pts.begin(), pts.end(), []( auto a, auto b ) { return a.x < b.x; } );
  auto [ymin, ymax] = std::minmax_element( pts.begin(), pts.end(), []( auto a, auto b ) { return a.y < b.y; } );
  return ( xmax->x - xmin->x ) + ( ymax->y - ymin->y );
}

namespace detail
{

inline std::vector<node_id> net_terminals( netlist const& ntk, node_id driver )
{
  std::vector<node_id> t{ driver };
  for ( auto s : ntk.fanouts( driver ) )
    if ( std::find( t.begin(), t.end(), s ) == t.end() )
      t.push_back( s );
  return t;
}

} /* namespace detail */

/*! \brief Sum of `q(n) * HPWL(n)` over nets whose terminals all lie on `die`.
 *
 * Nets without sinks are ignored.
 */
inline double bbox_cost_sd( netlist const& ntk, placement const& p, uint32_t die )
{
  double cost = 0.0;
  ntk.foreach_node( [&]( node_id id ) {
    if ( ntk.fanouts( id ).empty() )
      return;
    auto const terms = detail::net_terminals( ntk, id );
    std::vector<point> pts;
    for ( auto t : terms )
    {
      auto const& b = p.at( ntk.name( t ) );
      if ( b.die != die )
        return;
      pts.push_back( { b.x, b.y } );
    }
    cost += p.q( static_cast<uint32_t>( terms.size() ) ) * hpwl( pts );
  } );
  return cost;
}

struct bbox_md_breakdown
{
  double intra_die{ 0.0 };
  double inter_die_local{ 0.0 };
  uint64_t n_sll{ 0u };
  double sll_term{ 0.0 };

  double total() const { return intra_die + inter_die_local + sll_term; }
};

/*! \brief Multi-die cost: intra-die HPWL, die-local boxes of cut nets, and `N_sll * L_sll`.
 *
 * A cut net gets one box per die it touches.  The box includes the net's
 * terminals on that die and a virtual terminal where the net crosses each
 * die edge towards another touched die.  The crossing column is the lower
 * median of the x coordinates of all terminals, clamped to the die width.
 * Placed dies must agree with the assignment.
 */
inline bbox_md_breakdown bbox_cost_md_breakdown( netlist const& ntk, placement const& p, die_assignment const& a,
                                                 sll_count_mode mode = sll_count_mode::per_destination_die )
{
  validate_assignment( ntk, a );
  ntk.foreach_node( [&]( node_id id ) {
    if ( ntk.fanouts( id ).empty() && !ntk.is_lut( id ) && !ntk.is_latch( id ) )
      return;
    if ( p.at( ntk.name( id ) ).die != a.die( id ) )
      throw error( "block '" + ntk.name( id ) + "' is placed on die " + std::to_string( p.at( ntk.name( id ) ).die ) +
                   " but assigned to die " + std::to_string( a.die( id ) ) );
  } );
  bbox_md_breakdown r;
  ntk.foreach_node( [&]( node_id id ) {
    if ( ntk.fanouts( id ).empty() )
      return;
    auto const terms = detail::net_terminals( ntk, id );
    std::map<uint32_t, std::vector<point>> by_die;
    std::vector<double> xs;
    for ( auto t : terms )
    {
      auto const& b = p.at( ntk.name( t ) );
      by_die[b.die].push_back( { b.x, b.y } );
      xs.push_back( b.x );
    }
    auto const q = p.q( static_cast<uint32_t>( terms.size() ) );
    if ( by_die.size() == 1u )
    {
      r.intra_die += q * hpwl( by_die.begin()->second );
      return;
    }

    std::sort( xs.begin(), xs.end() );
    auto const column = std::clamp( xs[( xs.size() - 1u ) / 2u], 0.0, p.die_width );
    auto const lowest = by_die.begin()->first;
    auto const highest = by_die.rbegin()->first;
    for ( auto& [die, pts] : by_die )
    {
      if ( die > lowest )
        pts.push_back( { column, 0.0 } );
      if ( die < highest )
        pts.push_back( { column, p.die_height } );
      r.inter_die_local += q * hpwl( pts );
    }

    auto const driver_die = p.at( ntk.name( id ) ).die;
    std::set<uint32_t> dests;
    for ( auto s : ntk.fanouts( id ) )
      if ( auto d = p.at( ntk.name( s ) ).die; d != driver_die )
        dests.insert( d );
    r.n_sll += mode == sll_count_mode::raw_net ? ( dests.empty() ? 0u : 1u ) : dests.size();
  } );
  r.sll_term = static_cast<double>( r.n_sll ) * p.l_sll;
  return r;
}

inline double bbox_cost_md( netlist const& ntk, placement const& p, die_assignment const& a,
                            sll_count_mode mode = sll_count_mode::per_destination_die )
{
  return bbox_cost_md_breakdown( ntk, p, a, mode ).total();
}

/*! \brief Builds a die assignment from the dies recorded in a placement. */
inline die_assignment assignment_from_placement( netlist const& ntk, placement const& p, uint32_t num_dies )
{
  die_assignment a;
  a.num_dies = num_dies;
  a.die_of.assign( ntk.size(), 0u );
  a.weight.assign( ntk.size(), 0u );
  ntk.foreach_node( [&]( node_id id ) {
    auto const& b = p.at( ntk.name( id ) );
    if ( b.die >= num_dies )
      throw error( "block '" + ntk.name( id ) + "' is placed on die " + std::to_string( b.die ) +
                   " but only " + std::to_string( num_dies ) + " dies exist" );
    a.set( id, b.die, logic_weight( ntk, id ) );
  } );
  return a;
}

} /* namespace sllopt */
