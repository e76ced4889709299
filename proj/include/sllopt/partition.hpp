/*!
  \file partition.hpp
  \brief Die assignment of netlist nodes

  Every live node carries a die index.  LUTs and latches weigh 1 and count
  towards die loads; primary inputs weigh 0 but still carry a die, because
  a primary input feeding a LUT on another die occupies an inter-die link
  like any other driver.
*/

#pragma once

#include "error.hpp"
#include "netlist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sllopt
{

struct die_assignment
{
  uint32_t num_dies{ 2u };

  /*! \brief Die index per node identifier (meaningless for dead nodes). */
  std::vector<uint32_t> die_of;

  /*! \brief Logic weight per node identifier; zero for inputs and dead nodes. */
  std::vector<uint32_t> weight;

  uint32_t die( node_id id ) const { return die_of.at( id ); }

  void set( node_id id, uint32_t die, uint32_t w )
  {
    if ( id >= die_of.size() )
    {
      die_of.resize( id + 1u, 0u );
      weight.resize( id + 1u, 0u );
    }
    die_of[id] = die;
    weight[id] = w;
  }

  bool operator==( die_assignment const& ) const = default;
};

inline uint32_t logic_weight( netlist const& ntk, node_id id )
{
  if ( !ntk.is_alive( id ) )
    return 0u;
  return ntk.kind( id ) == node_kind::primary_input ? 0u : 1u;
}

/*! \brief Per-die sum of weights. */
inline std::vector<uint64_t> die_loads( die_assignment const& a )
{
  std::vector<uint64_t> load( a.num_dies, 0u );
  for ( std::size_t i = 0; i < a.die_of.size(); ++i )
    if ( a.weight[i] > 0u )
      load.at( a.die_of[i] ) += a.weight[i];
  return load;
}

/*! \brief Imbalance ratio: heaviest die load over the ideal share `W / K`. */
inline double imbalance( die_assignment const& a )
{
  auto const load = die_loads( a );
  uint64_t total = 0, heaviest = 0;
  for ( auto l : load )
  {
    total += l;
    heaviest = std::max( heaviest, l );
  }
  if ( total == 0u )
    throw error( "imbalance is undefined for an empty assignment" );
  return static_cast<double>( heaviest ) * static_cast<double>( a.num_dies ) / static_cast<double>( total );
}

/*! \brief Checks that every live node has an in-range die and up-to-date weight. */
inline void validate_assignment( netlist const& ntk, die_assignment const& a )
{
  if ( a.num_dies < 1u )
    throw error( "assignment needs at least one die" );
  ntk.foreach_node( [&]( node_id id ) {
    if ( id >= a.die_of.size() )
      throw error( "node '" + ntk.name( id ) + "' has no die assignment" );
    if ( a.die_of[id] >= a.num_dies )
      throw error( "node '" + ntk.name( id ) + "' is assigned to die " + std::to_string( a.die_of[id] ) +
                   " but only " + std::to_string( a.num_dies ) + " dies exist" );
  } );
}

enum class partition_mode
{
  fm_mincut,
  hash_label,
  external_file
};

struct partition_params
{
  uint32_t num_dies{ 2u };

  /*! \brief Upper bound on the imbalance ratio of the result. */
  double imbalance_upper_bound{ 1.25 };

  uint64_t seed{ 1u };

  partition_mode mode{ partition_mode::fm_mincut };
};

struct partition_stats
{
  /*! \brief Hyperedge cut after each accepted pass, per bisection, initial cut first. */
  std::vector<std::vector<uint64_t>> pass_cuts;

  /*! \brief Set when integrality made `UB` unreachable and the tightest feasible load was used. */
  bool bound_relaxed{ false };

  uint64_t die_capacity{ 0u };
};

/*! \brief 64-bit FNV-1a string hash. */
inline uint64_t fnv1a_64( std::string_view s )
{
  uint64_t h = 0xcbf29ce484222325ull;
  for ( unsigned char c : s )
  {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

/*! \brief Labels each node with `fnv1a_64(name) mod K`. */
inline die_assignment partition_hash( netlist const& ntk, uint32_t num_dies )
{
  if ( num_dies < 2u )
    throw error( "hash labeling needs at least two dies" );
  die_assignment a;
  a.num_dies = num_dies;
  a.die_of.assign( ntk.size(), 0u );
  a.weight.assign( ntk.size(), 0u );
  ntk.foreach_node( [&]( node_id id ) {
    a.set( id, static_cast<uint32_t>( fnv1a_64( ntk.name( id ) ) % num_dies ), logic_weight( ntk, id ) );
  } );
  return a;
}

/*! \brief Number of nets whose driver and sinks touch at least two dies. */
inline uint64_t hyperedge_cut( netlist const& ntk, die_assignment const& a )
{
  uint64_t cut = 0;
  ntk.foreach_node( [&]( node_id id ) {
    auto const d = a.die( id );
    for ( auto s : ntk.fanouts( id ) )
      if ( a.die( s ) != d )
      {
        ++cut;
        break;
      }
  } );
  return cut;
}

namespace detail
{

/* Platform-independent shuffle driven by raw mt19937_64 output. */
template<class T>
void stable_shuffle( std::vector<T>& v, std::mt19937_64& rng )
{
  for ( std::size_t i = v.size(); i > 1u; --i )
  {
    auto const j = static_cast<std::size_t>( rng() % i );
    std::swap( v[i - 1u], v[j] );
  }
}

struct hypergraph
{
  std::vector<uint32_t> weight;                 /* per vertex */
  std::vector<std::vector<uint32_t>> nets;      /* pins per net */
  std::vector<std::vector<uint32_t>> vertex_nets;
};

/* Fiduccia-Mattheyses bisection with per-side load caps. */
class fm_bisection
{
public:
  fm_bisection( hypergraph const& g, std::vector<uint8_t>& side, uint64_t cap0, uint64_t cap1 )
      : g_( g ), side_( side ), cap_{ cap0, cap1 }
  {
  }

  /* Runs passes until one fails to improve; returns the cut after each accepted pass. */
  std::vector<uint64_t> run()
  {
    std::vector<uint64_t> cuts{ current_cut() };
    while ( true )
    {
      auto const before = cuts.back();
      auto const after = pass();
      if ( after >= before )
        break;
      cuts.push_back( after );
    }
    return cuts;
  }

  uint64_t current_cut() const
  {
    uint64_t cut = 0;
    for ( auto const& pins : g_.nets )
    {
      bool has[2] = { false, false };
      for ( auto p : pins )
        has[side_[p]] = true;
      cut += ( has[0] && has[1] ) ? 1u : 0u;
    }
    return cut;
  }

private:
  using bucket = std::set<std::pair<int64_t, uint32_t>>; /* (-gain, vertex) */

  uint64_t pass()
  {
    auto const n = g_.weight.size();
    std::vector<std::array<uint32_t, 2>> count( g_.nets.size(), { 0u, 0u } );
    for ( std::size_t e = 0; e < g_.nets.size(); ++e )
      for ( auto p : g_.nets[e] )
        ++count[e][side_[p]];

    uint64_t load[2] = { 0u, 0u };
    for ( std::size_t v = 0; v < n; ++v )
      load[side_[v]] += g_.weight[v];

    std::vector<int64_t> gain( n, 0 );
    for ( std::size_t v = 0; v < n; ++v )
    {
      auto const from = side_[v];
      for ( auto e : g_.vertex_nets[v] )
      {
        if ( count[e][from] == 1u )
          ++gain[v];
        if ( count[e][1u - from] == 0u )
          --gain[v];
      }
    }

    /* buckets indexed by [side][weighted] */
    bucket buckets[2][2];
    auto bucket_of = [&]( uint32_t v ) -> bucket& { return buckets[side_[v]][g_.weight[v] > 0u ? 1 : 0]; };
    for ( uint32_t v = 0; v < n; ++v )
      bucket_of( v ).emplace( -gain[v], v );

    std::vector<uint8_t> locked( n, 0u );
    auto update = [&]( uint32_t v, int64_t delta ) {
      if ( locked[v] || delta == 0 )
        return;
      auto& b = bucket_of( v );
      b.erase( { -gain[v], v } );
      gain[v] += delta;
      b.emplace( -gain[v], v );
    };

    uint64_t cut = current_cut();
    uint64_t best_cut = cut;
    std::size_t best_prefix = 0;
    std::vector<uint32_t> moves;

    while ( true )
    {
      /* best feasible move: highest gain, then heavier source side, then lowest id */
      bool found = false;
      int64_t best_gain = 0;
      uint32_t best_v = 0;
      uint64_t best_src_load = 0;
      for ( int s = 0; s < 2; ++s )
        for ( int w = 0; w < 2; ++w )
        {
          auto const& b = buckets[s][w];
          if ( b.empty() )
            continue;
          auto const [neg_gain, v] = *b.begin();
          if ( load[1 - s] + g_.weight[v] > cap_[1 - s] )
            continue;
          auto const gv = -neg_gain;
          if ( !found || gv > best_gain || ( gv == best_gain && load[s] > best_src_load ) ||
               ( gv == best_gain && load[s] == best_src_load && v < best_v ) )
          {
            found = true;
            best_gain = gv;
            best_v = v;
            best_src_load = load[s];
          }
        }
      if ( !found )
        break;

      auto const v = best_v;
      auto const from = side_[v];
      auto const to = static_cast<uint8_t>( 1u - from );
      bucket_of( v ).erase( { -gain[v], v } );
      locked[v] = 1u;

      for ( auto e : g_.vertex_nets[v] )
      {
        auto const& pins = g_.nets[e];
        if ( count[e][to] == 0u )
        {
          for ( auto p : pins )
            update( p, +1 );
        }
        else if ( count[e][to] == 1u )
        {
          for ( auto p : pins )
            if ( side_[p] == to )
              update( p, -1 );
        }
        --count[e][from];
        ++count[e][to];
        if ( count[e][from] == 0u )
        {
          for ( auto p : pins )
            update( p, -1 );
        }
        else if ( count[e][from] == 1u )
        {
          for ( auto p : pins )
            if ( side_[p] == from && p != v )
              update( p, +1 );
        }
      }
      side_[v] = to;
      load[from] -= g_.weight[v];
      load[to] += g_.weight[v];
      cut = static_cast<uint64_t>( static_cast<int64_t>( cut ) - best_gain );
      moves.push_back( v );
      if ( cut < best_cut )
      {
        best_cut = cut;
        best_prefix = moves.size();
      }
    }

    /* roll back past the best prefix */
    for ( std::size_t i = moves.size(); i > best_prefix; --i )
      side_[moves[i - 1u]] ^= 1u;
    return best_cut;
  }

  hypergraph const& g_;
  std::vector<uint8_t>& side_;
  uint64_t cap_[2];
};

} /* namespace detail */

/*! \brief Min-cut partitioning by recursive FM bisection under an imbalance bound.
 *
 * Dies `[lo, lo + k/2)` go to the left half of every bisection, so lower
 * indices always come from the left subtree.
 */
inline die_assignment partition_fm( netlist const& ntk, partition_params const& ps, partition_stats* st = nullptr )
{
  if ( ps.num_dies < 2u )
    throw error( "partitioning needs at least two dies" );
  if ( ps.imbalance_upper_bound < 1.0 )
    throw error( "imbalance upper bound must be at least 1.0" );

  std::vector<node_id> vertices;
  ntk.foreach_node( [&]( node_id id ) { vertices.push_back( id ); } );
  uint64_t total = 0;
  uint32_t heaviest = 0;
  for ( auto v : vertices )
  {
    total += logic_weight( ntk, v );
    heaviest = std::max( heaviest, logic_weight( ntk, v ) );
  }
  if ( total == 0u )
    throw error( "cannot partition a netlist without logic nodes" );

  auto const k = ps.num_dies;
  auto const bound = ps.imbalance_upper_bound * static_cast<double>( total ) / static_cast<double>( k );
  if ( bound < static_cast<double>( heaviest ) )
    throw error( "imbalance bound is infeasible: UB*|V|/K is below the heaviest node weight" );
  auto cap = static_cast<uint64_t>( std::floor( bound + 1e-9 ) );
  auto const ideal = ( total + k - 1u ) / k;
  partition_stats local;
  auto& stats = st ? *st : local;
  if ( cap < ideal )
  {
    cap = ideal;
    stats.bound_relaxed = true;
  }
  stats.die_capacity = cap;

  die_assignment result;
  result.num_dies = k;
  result.die_of.assign( ntk.size(), 0u );
  result.weight.assign( ntk.size(), 0u );
  for ( auto v : vertices )
    result.weight[v] = logic_weight( ntk, v );

  std::mt19937_64 rng( ps.seed );

  /* explicit stack of (vertex subset, first die, number of dies) */
  struct task
  {
    std::vector<node_id> members;
    uint32_t lo, count;
  };
  std::vector<task> stack;
  stack.push_back( { vertices, 0u, k } );
  std::vector<int64_t> local_index( ntk.size(), -1 );

  while ( !stack.empty() )
  {
    auto t = std::move( stack.back() );
    stack.pop_back();
    if ( t.count == 1u )
    {
      for ( auto v : t.members )
        result.die_of[v] = t.lo;
      continue;
    }
    auto const k_left = t.count / 2u;
    auto const k_right = t.count - k_left;

    detail::hypergraph g;
    for ( std::size_t i = 0; i < t.members.size(); ++i )
    {
      local_index[t.members[i]] = static_cast<int64_t>( i );
      g.weight.push_back( logic_weight( ntk, t.members[i] ) );
    }
    g.vertex_nets.resize( t.members.size() );
    for ( auto v : t.members )
    {
      std::vector<uint32_t> pins{ static_cast<uint32_t>( local_index[v] ) };
      for ( auto s : ntk.fanouts( v ) )
        if ( local_index[s] >= 0 )
          pins.push_back( static_cast<uint32_t>( local_index[s] ) );
      std::sort( pins.begin() + 1, pins.end() );
      pins.erase( std::unique( pins.begin() + 1, pins.end() ), pins.end() );
      if ( pins.size() < 2u )
        continue;
      auto const e = static_cast<uint32_t>( g.nets.size() );
      for ( auto p : pins )
        g.vertex_nets[p].push_back( e );
      g.nets.push_back( std::move( pins ) );
    }

    /* seeded initial split meeting the left target exactly */
    uint64_t part_total = 0;
    for ( auto w : g.weight )
      part_total += w;
    auto const target_left = static_cast<uint64_t>(
        std::llround( static_cast<double>( part_total ) * k_left / static_cast<double>( t.count ) ) );
    std::vector<uint32_t> perm( t.members.size() );
    for ( uint32_t i = 0; i < perm.size(); ++i )
      perm[i] = i;
    detail::stable_shuffle( perm, rng );
    std::vector<uint8_t> side( t.members.size(), 1u );
    uint64_t left = 0;
    for ( auto i : perm )
    {
      if ( g.weight[i] == 0u )
        side[i] = static_cast<uint8_t>( rng() & 1u );
      else if ( left + g.weight[i] <= target_left )
      {
        side[i] = 0u;
        left += g.weight[i];
      }
    }

    detail::fm_bisection fm( g, side, cap * k_left, cap * k_right );
    stats.pass_cuts.push_back( fm.run() );

    task lt{ {}, t.lo, k_left }, rt{ {}, t.lo + k_left, k_right };
    for ( std::size_t i = 0; i < t.members.size(); ++i )
    {
      local_index[t.members[i]] = -1;
      ( side[i] == 0u ? lt : rt ).members.push_back( t.members[i] );
    }
    stack.push_back( std::move( rt ) );
    stack.push_back( std::move( lt ) );
  }
  return result;
}

/*! \brief Writes `<name> <die>` lines for every live node in identifier order. */
inline void write_assignment( netlist const& ntk, die_assignment const& a, std::ostream& out )
{
  out << "# node die (" << a.num_dies << " dies)\n";
  ntk.foreach_node( [&]( node_id id ) { out << ntk.name( id ) << ' ' << a.die( id ) << '\n'; } );
}

inline void save_assignment( netlist const& ntk, die_assignment const& a, std::string const& path )
{
  std::ofstream out( path );
  if ( !out )
    throw error( "cannot write '" + path + "'" );
  write_assignment( ntk, a, out );
}

/*! \brief Reads `<name> <die>` lines.
 *
 * Every LUT and latch must be listed.  A primary input that is not listed
 * inherits the die of its lowest-identifier sink, or die 0 without sinks.
 */
inline die_assignment read_assignment( netlist const& ntk, std::istream& in, uint32_t num_dies )
{
  die_assignment a;
  a.num_dies = num_dies;
  a.die_of.assign( ntk.size(), 0u );
  a.weight.assign( ntk.size(), 0u );
  std::vector<uint8_t> seen( ntk.size(), 0u );

  std::string raw;
  std::size_t line = 0;
  while ( std::getline( in, raw ) )
  {
    ++line;
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    std::istringstream ss( raw );
    std::string name, die_tok, extra;
    if ( !( ss >> name ) )
      continue;
    if ( !( ss >> die_tok ) || ( ss >> extra ) )
      throw parse_error( line, "expected '<name> <die>'" );
    std::size_t used = 0;
    long long die = -1;
    try
    {
      die = std::stoll( die_tok, &used );
    }
    catch ( std::exception const& )
    {
      used = 0;
    }
    if ( used != die_tok.size() )
      throw parse_error( line, "invalid die index '" + die_tok + "'" );
    if ( die < 0 || die >= static_cast<long long>( num_dies ) )
      throw parse_error( line, "die " + die_tok + " of '" + name + "' is out of range [0, " + std::to_string( num_dies ) + ")" );
    auto id = ntk.find( name );
    if ( !id )
      throw parse_error( line, "unknown node '" + name + "'" );
    if ( seen[*id] )
      throw parse_error( line, "duplicate entry for '" + name + "'" );
    seen[*id] = 1u;
    a.die_of[*id] = static_cast<uint32_t>( die );
  }

  ntk.foreach_node( [&]( node_id id ) {
    a.weight[id] = logic_weight( ntk, id );
    if ( !seen[id] && ntk.kind( id ) != node_kind::primary_input )
      throw error( "assignment file does not list node '" + ntk.name( id ) + "'" );
  } );
  for ( auto pi : ntk.pis() )
  {
    if ( seen[pi] )
      continue;
    auto const& fo = ntk.fanouts( pi );
    if ( !fo.empty() )
      a.die_of[pi] = a.die_of[*std::min_element( fo.begin(), fo.end() )];
  }
  return a;
}

inline die_assignment load_assignment( netlist const& ntk, std::string const& path, uint32_t num_dies )
{
  std::ifstream in( path );
  if ( !in )
    throw error( "cannot open '" + path + "'" );
  return read_assignment( ntk, in, num_dies );
}

/*! \brief Number of dies implied by an assignment file (largest index + 1). */
inline uint32_t count_dies_in_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw error( "cannot open '" + path + "'" );
  uint32_t dies = 0;
  std::string raw;
  while ( std::getline( in, raw ) )
  {
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    std::istringstream ss( raw );
    std::string name;
    long long die = -1;
    if ( ss >> name >> die && die >= 0 )
      dies = std::max<uint32_t>( dies, static_cast<uint32_t>( die ) + 1u );
  }
  return std::max( dies, 1u );
}

/*! \brief Dispatches to FM or hash labeling. */
inline die_assignment partition( netlist const& ntk, partition_params const& ps, partition_stats* st = nullptr )
{
  switch ( ps.mode )
  {
  case partition_mode::fm_mincut:
    return partition_fm( ntk, ps, st );
  case partition_mode::hash_label:
    return partition_hash( ntk, ps.num_dies );
  default:
    throw error( "external assignments are loaded with load_assignment" );
  }
}

} /* namespace sllopt */
