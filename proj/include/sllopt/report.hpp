/*!
  \file report.hpp
  \brief Before/after metric reports and their JSON and text renderings
*/

#pragma once

#include "metrics.hpp"
#include "netlist.hpp"
#include "partition.hpp"
#include "resynth/resynthesize.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sllopt
{

using json = nlohmann::ordered_json;

struct metrics_snapshot
{
  uint64_t n_sll{ 0u };
  uint64_t n_sll_fo{ 0u };
  double rho{ 0.0 };
  uint64_t lut_count{ 0u };
  std::vector<double> bbox_sd;
  std::optional<double> bbox_md;

  bool operator==( metrics_snapshot const& ) const = default;
};

inline metrics_snapshot take_snapshot( netlist const& ntk, die_assignment const& a,
                                       sll_count_mode mode = sll_count_mode::per_destination_die,
                                       placement const* p = nullptr )
{
  metrics_snapshot s;
  s.n_sll = count_sll( ntk, a, mode );
  s.n_sll_fo = count_sll_fo( ntk, a );
  s.rho = imbalance( a );
  s.lut_count = ntk.num_luts();
  if ( p )
  {
    for ( uint32_t d = 0; d < a.num_dies; ++d )
      s.bbox_sd.push_back( bbox_cost_sd( ntk, *p, d ) );
    s.bbox_md = bbox_cost_md( ntk, *p, a, mode );
  }
  return s;
}

inline std::string_view to_string( sll_count_mode m )
{
  return m == sll_count_mode::raw_net ? "raw-net" : "per-destination-die";
}

struct metrics_report
{
  sll_count_mode mode{ sll_count_mode::per_destination_die };
  metrics_snapshot before;
  metrics_snapshot after;

  /*! \brief Delay of one inter-die link in ps, for annotation only. */
  std::optional<double> sll_link_delay_ps;

  bool operator==( metrics_report const& ) const = default;
};

namespace detail
{

inline json delta_entry( double before, double after )
{
  json e;
  e["before"] = before;
  e["after"] = after;
  e["delta"] = after - before;
  if ( before != 0.0 )
    e["delta_pct"] = 100.0 * ( after - before ) / before;
  else
    e["delta_pct"] = nullptr;
  return e;
}

inline json delta_entry( uint64_t before, uint64_t after )
{
  json e;
  e["before"] = before;
  e["after"] = after;
  e["delta"] = static_cast<int64_t>( after ) - static_cast<int64_t>( before );
  if ( before != 0u )
    e["delta_pct"] = 100.0 * ( static_cast<double>( after ) - static_cast<double>( before ) ) / static_cast<double>( before );
  else
    e["delta_pct"] = nullptr;
  return e;
}

/* null on a side without a value */
inline json delta_entry( std::optional<double> before, std::optional<double> after )
{
  if ( before && after )
    return delta_entry( *before, *after );
  json e;
  e["before"] = before ? json( *before ) : json( nullptr );
  e["after"] = after ? json( *after ) : json( nullptr );
  e["delta"] = nullptr;
  e["delta_pct"] = nullptr;
  return e;
}

inline std::optional<double> opt_double( json const& j )
{
  return j.is_null() ? std::nullopt : std::optional<double>( j.get<double>() );
}

} /* namespace detail */

inline json to_json( metrics_report const& r )
{
  json j;
  j["sll_count_mode"] = to_string( r.mode );
  j["n_sll"] = detail::delta_entry( r.before.n_sll, r.after.n_sll );
  j["n_sll_fo"] = detail::delta_entry( r.before.n_sll_fo, r.after.n_sll_fo );
  j["rho"] = detail::delta_entry( r.before.rho, r.after.rho );
  j["lut_count"] = detail::delta_entry( r.before.lut_count, r.after.lut_count );
  if ( r.before.bbox_md || r.after.bbox_md )
  {
    j["bbox_md"] = detail::delta_entry( r.before.bbox_md, r.after.bbox_md );
    json sd = json::array();
    auto const dies = std::max( r.before.bbox_sd.size(), r.after.bbox_sd.size() );
    auto side = []( std::vector<double> const& v, std::size_t d ) {
      return d < v.size() ? std::optional<double>( v[d] ) : std::nullopt;
    };
    for ( std::size_t d = 0; d < dies; ++d )
      sd.push_back( detail::delta_entry( side( r.before.bbox_sd, d ), side( r.after.bbox_sd, d ) ) );
    j["bbox_sd"] = sd;
  }
  if ( r.sll_link_delay_ps )
    j["sll_link_delay_ps"] = *r.sll_link_delay_ps;
  return j;
}

inline metrics_report metrics_report_from_json( json const& j )
{
  metrics_report r;
  r.mode = j.at( "sll_count_mode" ).get<std::string>() == "raw-net" ? sll_count_mode::raw_net
                                                                      : sll_count_mode::per_destination_die;
  auto side = [&]( char const* key, metrics_snapshot& s ) {
    s.n_sll = j.at( "n_sll" ).at( key ).get<uint64_t>();
    s.n_sll_fo = j.at( "n_sll_fo" ).at( key ).get<uint64_t>();
    s.rho = j.at( "rho" ).at( key ).get<double>();
    s.lut_count = j.at( "lut_count" ).at( key ).get<uint64_t>();
    if ( j.contains( "bbox_md" ) )
    {
      s.bbox_md = detail::opt_double( j.at( "bbox_md" ).at( key ) );
      for ( auto const& e : j.at( "bbox_sd" ) )
        if ( !e.at( key ).is_null() )
          s.bbox_sd.push_back( e.at( key ).get<double>() );
    }
  };
  side( "before", r.before );
  side( "after", r.after );
  if ( j.contains( "sll_link_delay_ps" ) )
    r.sll_link_delay_ps = j.at( "sll_link_delay_ps" ).get<double>();
  return r;
}

/*! \brief Inter-die link delay from a wire table file: the first entry whose scope is "inter-die". */
inline std::optional<double> load_sll_link_delay( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
    throw error( "cannot open wire delay table '" + path + "'" );
  auto const j = json::parse( in );
  for ( auto const& w : j.at( "wires" ) )
    if ( w.at( "scope" ).get<std::string>() == "inter-die" )
      return w.at( "delay_ps" ).get<double>();
  return std::nullopt;
}

inline std::string to_text( metrics_report const& r )
{
  std::ostringstream out;
  out << std::fixed;
  auto row = [&]( std::string const& name, double before, double after, int precision ) {
    out << std::left << std::setw( 12 ) << name << std::right << std::setprecision( precision ) << std::setw( 14 )
        << before << std::setw( 14 ) << after << std::setw( 14 ) << after - before;
    if ( before != 0.0 )
      out << std::setprecision( 2 ) << std::setw( 11 ) << 100.0 * ( after - before ) / before << "%";
    else
      out << std::setw( 12 ) << "n/a";
    out << '\n';
  };
  out << std::left << std::setw( 12 ) << "metric" << std::right << std::setw( 14 ) << "before" << std::setw( 14 )
      << "after" << std::setw( 14 ) << "delta" << std::setw( 12 ) << "delta%" << '\n';
  row( "n_sll", static_cast<double>( r.before.n_sll ), static_cast<double>( r.after.n_sll ), 0 );
  row( "n_sll_fo", static_cast<double>( r.before.n_sll_fo ), static_cast<double>( r.after.n_sll_fo ), 0 );
  row( "rho", r.before.rho, r.after.rho, 4 );
  row( "lut_count", static_cast<double>( r.before.lut_count ), static_cast<double>( r.after.lut_count ), 0 );
  if ( r.before.bbox_md && r.after.bbox_md )
  {
    row( "bbox_md", *r.before.bbox_md, *r.after.bbox_md, 2 );
    for ( std::size_t d = 0; d < r.after.bbox_sd.size() && d < r.before.bbox_sd.size(); ++d )
      row( "bbox_sd[" + std::to_string( d ) + "]", r.before.bbox_sd[d], r.after.bbox_sd[d], 2 );
  }
  else if ( r.after.bbox_md )
    out << std::setprecision( 2 ) << "bbox_md (after only): " << *r.after.bbox_md << '\n';
  out << "sll count mode: " << to_string( r.mode ) << '\n';
  if ( r.sll_link_delay_ps )
    out << std::setprecision( 1 ) << "inter-die link delay: " << *r.sll_link_delay_ps << " ps\n";
  return out.str();
}

inline json to_json( pivot_record const& p )
{
  json j;
  j["pass"] = p.pass;
  j["pivot"] = p.pivot;
  j["outcome"] = to_string( p.outcome );
  j["cross_before"] = p.cross_before;
  j["cross_after"] = p.cross_after;
  j["removed_fanin"] = p.removed_fanin;
  j["support"] = p.support;
  j["function"] = p.function;
  j["removed_nodes"] = p.removed_nodes;
  j["window_pis"] = p.window_pis;
  j["window_nodes"] = p.window_nodes;
  j["divisors"] = p.divisors;
  j["in_die_divisors"] = p.in_die_divisors;
  j["care_minterms"] = p.care_minterms;
  j["delta_sll_fo"] = p.delta_sll_fo;
  j["delta_luts"] = p.delta_luts;
  j["delta_rho"] = p.delta_rho;
  return j;
}

inline json to_json( resynth_report const& r )
{
  json j;
  j["passes_run"] = r.passes_run;
  j["commits"] = r.commits;
  j["luts_before"] = r.luts_before;
  j["luts_after"] = r.luts_after;
  j["sll_fo_before"] = r.sll_fo_before;
  j["sll_fo_after"] = r.sll_fo_after;
  j["rho_before"] = r.rho_before;
  j["rho_after"] = r.rho_after;
  j["divisor_support_reading"] = "window-pi";
  json trail = json::array();
  for ( auto const& p : r.records )
    trail.push_back( to_json( p ) );
  j["audit_trail"] = trail;
  return j;
}

inline std::string to_text( resynth_report const& r )
{
  std::ostringstream out;
  out << "passes: " << r.passes_run << ", commits: " << r.commits << '\n';
  std::map<std::string, uint64_t> tally;
  for ( auto const& p : r.records )
    ++tally[std::string( to_string( p.outcome ) )];
  for ( auto const& [k, v] : tally )
    out << "  " << std::left << std::setw( 22 ) << k << v << '\n';
  for ( auto const& p : r.records )
    if ( p.outcome == pivot_outcome::committed )
    {
      out << "  commit " << p.pivot << ": drop " << p.removed_fanin << ", support {";
      for ( std::size_t i = 0; i < p.support.size(); ++i )
        out << ( i ? ", " : "" ) << p.support[i];
      out << "}, cross " << p.cross_before << " -> " << p.cross_after << ", sll_fo " << std::showpos
          << p.delta_sll_fo << ", luts " << p.delta_luts << std::noshowpos << '\n';
    }
  return out.str();
}

} /* namespace sllopt */
