/*!
  \file blif.hpp
  \brief BLIF reader and writer for flat LUT netlists

  Supported: `.model`, `.inputs`, `.outputs`, single-output `.names` covers
  with on-set rows, `.latch`, `.end`, `#` comments and `\` continuation.
  Covers are expanded to truth tables with the first `.names` input as
  variable 0.
*/

#pragma once

#include "error.hpp"
#include "netlist.hpp"
#include "traversal.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace sllopt
{

/*! \brief Net-name prefix reserved for generated die-boundary pins. */
inline constexpr std::string_view reserved_prefix = "__sll_";

struct blif_read_params
{
  /*! \brief Largest accepted LUT size. */
  uint32_t k_max{ 6u };

  /*! \brief Accept nets named with the reserved `__sll_` prefix. */
  bool allow_reserved_names{ false };
};

struct blif_write_params
{
  /*! \brief Merge minterm rows into cubes with `-` literals. */
  bool merge_cubes{ false };
};

namespace detail
{

struct blif_line
{
  std::size_t number;
  std::vector<std::string> tokens;
};

inline std::vector<blif_line> blif_logical_lines( std::istream& in )
{
  std::vector<blif_line> lines;
  std::string raw, pending;
  std::size_t number = 0, start = 0;
  while ( std::getline( in, raw ) )
  {
    ++number;
    if ( auto hash = raw.find( '#' ); hash != std::string::npos )
      raw.erase( hash );
    while ( !raw.empty() && ( raw.back() == '\r' || raw.back() == ' ' || raw.back() == '\t' ) )
      raw.pop_back();
    if ( pending.empty() )
      start = number;
    if ( !raw.empty() && raw.back() == '\\' )
    {
      raw.pop_back();
      pending += raw;
      pending += ' ';
      continue;
    }
    pending += raw;
    std::istringstream ss( pending );
    blif_line line{ start, {} };
    for ( std::string tok; ss >> tok; )
      line.tokens.push_back( std::move( tok ) );
    if ( !line.tokens.empty() )
      lines.push_back( std::move( line ) );
    pending.clear();
  }
  if ( !pending.empty() )
    throw parse_error( start, "dangling line continuation" );
  return lines;
}

struct names_block
{
  std::size_t line;
  std::vector<std::string> inputs;
  std::string output;
  std::vector<std::pair<std::string, std::size_t>> rows;
};

struct latch_block
{
  std::size_t line;
  std::string input, output, type, control;
  latch_init init{ latch_init::unknown };
};

inline truth_table compile_cover( names_block const& b )
{
  auto const k = static_cast<uint32_t>( b.inputs.size() );
  truth_table tt( k );
  for ( auto const& [row, line] : b.rows )
  {
    std::string plane, value;
    if ( k == 0u )
    {
      value = row;
    }
    else
    {
      std::istringstream ss( row );
      ss >> plane >> value;
      std::string extra;
      if ( ss >> extra )
        throw parse_error( line, "too many fields in cover row" );
    }
    if ( plane.size() != k )
      throw parse_error( line, "cover row has " + std::to_string( plane.size() ) + " literals, expected " + std::to_string( k ) );
    if ( value != "1" )
    {
      if ( value == "0" )
        throw parse_error( line, "off-set covers are not supported for '" + b.output + "'" );
      throw parse_error( line, "invalid output value '" + value + "'" );
    }

    /* expand don't-care literals */
    uint64_t fixed = 0, free_mask = 0;
    for ( uint32_t i = 0; i < k; ++i )
    {
      switch ( plane[i] )
      {
      case '1':
        fixed |= uint64_t{ 1 } << i;
        break;
      case '0':
        break;
      case '-':
        free_mask |= uint64_t{ 1 } << i;
        break;
      default:
        throw parse_error( line, std::string( "invalid literal '" ) + plane[i] + "'" );
      }
    }
    uint64_t sub = 0;
    do
    {
      tt.set_bit( fixed | sub );
      sub = ( sub - free_mask ) & free_mask;
    } while ( sub != 0u );
  }
  return tt;
}

/* Removes repeated fanins by restricting the function to equal values. */
inline std::pair<std::vector<std::string>, truth_table> dedupe_inputs( std::vector<std::string> const& inputs, truth_table const& tt )
{
  std::vector<std::string> unique;
  std::vector<uint32_t> slot( inputs.size() );
  for ( std::size_t i = 0; i < inputs.size(); ++i )
  {
    auto it = std::find( unique.begin(), unique.end(), inputs[i] );
    slot[i] = static_cast<uint32_t>( it - unique.begin() );
    if ( it == unique.end() )
      unique.push_back( inputs[i] );
  }
  if ( unique.size() == inputs.size() )
    return { inputs, tt };
  truth_table out( static_cast<uint32_t>( unique.size() ) );
  for ( uint64_t m = 0; m < out.num_bits(); ++m )
  {
    uint64_t full = 0;
    for ( std::size_t i = 0; i < inputs.size(); ++i )
      full |= ( ( m >> slot[i] ) & 1u ) << i;
    out.set_bit( m, tt.get_bit( full ) );
  }
  return { unique, out };
}

inline latch_init parse_init( std::string const& tok, std::size_t line )
{
  if ( tok == "0" )
    return latch_init::zero;
  if ( tok == "1" )
    return latch_init::one;
  if ( tok == "2" )
    return latch_init::dont_care;
  if ( tok == "3" )
    return latch_init::unknown;
  throw parse_error( line, "invalid latch init value '" + tok + "'" );
}

} /* namespace detail */

inline netlist read_blif( std::istream& in, blif_read_params const& ps = {} )
{
  using namespace detail;
  auto const lines = blif_logical_lines( in );

  std::string model = "top";
  bool seen_model = false, seen_end = false;
  std::vector<std::pair<std::string, std::size_t>> inputs, outputs;
  std::vector<names_block> names;
  std::vector<latch_block> latches;
  /* declaration order of drivers: 0 = names, 1 = latch */
  std::vector<std::pair<int, std::size_t>> order;

  names_block* current = nullptr;
  for ( auto const& line : lines )
  {
    auto const& t = line.tokens;
    if ( t[0][0] != '.' )
    {
      if ( current == nullptr )
        throw parse_error( line.number, "cover row outside of .names" );
      std::string row = t[0];
      for ( std::size_t i = 1; i < t.size(); ++i )
        row += ' ' + t[i];
      current->rows.emplace_back( std::move( row ), line.number );
      continue;
    }
    current = nullptr;
    if ( seen_end )
      throw parse_error( line.number, "content after .end (only one model is supported)" );

    auto const& kw = t[0];
    if ( kw == ".model" )
    {
      if ( seen_model )
        throw parse_error( line.number, "multiple .model sections (hierarchical BLIF is not supported)" );
      seen_model = true;
      if ( t.size() > 1 )
        model = t[1];
    }
    else if ( kw == ".inputs" )
    {
      for ( std::size_t i = 1; i < t.size(); ++i )
        inputs.emplace_back( t[i], line.number );
    }
    else if ( kw == ".outputs" )
    {
      for ( std::size_t i = 1; i < t.size(); ++i )
        outputs.emplace_back( t[i], line.number );
    }
    else if ( kw == ".names" )
    {
      if ( t.size() < 2 )
        throw parse_error( line.number, ".names without output" );
      names_block b{ line.number, { t.begin() + 1, t.end() - 1 }, t.back(), {} };
      order.emplace_back( 0, names.size() );
      names.push_back( std::move( b ) );
      current = &names.back();
    }
    else if ( kw == ".latch" )
    {
      latch_block l{ line.number, {}, {}, {}, {}, latch_init::unknown };
      if ( t.size() == 3 || t.size() == 4 )
      {
        l.input = t[1];
        l.output = t[2];
        if ( t.size() == 4 )
          l.init = parse_init( t[3], line.number );
      }
      else if ( t.size() == 5 || t.size() == 6 )
      {
        l.input = t[1];
        l.output = t[2];
        l.type = t[3];
        l.control = t[4];
        if ( t.size() == 6 )
          l.init = parse_init( t[5], line.number );
      }
      else
      {
        throw parse_error( line.number, "malformed .latch" );
      }
      order.emplace_back( 1, latches.size() );
      latches.push_back( std::move( l ) );
    }
    else if ( kw == ".end" )
    {
      seen_end = true;
    }
    else if ( kw == ".subckt" || kw == ".gate" || kw == ".mlatch" )
    {
      throw parse_error( line.number, kw + " is not supported: only flat LUT netlists can be read" );
    }
    else
    {
      throw parse_error( line.number, "unsupported directive " + kw );
    }
  }

  auto check_name = [&]( std::string const& n, std::size_t line ) {
    if ( !ps.allow_reserved_names && std::string_view( n ).starts_with( reserved_prefix ) )
      throw parse_error( line, "net name '" + n + "' uses the reserved prefix " + std::string( reserved_prefix ) );
  };

  netlist ntk( model, ps.k_max );
  std::map<std::string, std::size_t> driver_line;
  auto declare = [&]( std::string const& n, std::size_t line ) {
    check_name( n, line );
    if ( auto [it, fresh] = driver_line.emplace( n, line ); !fresh )
      throw parse_error( line, "net '" + n + "' has multiple drivers (first driven on line " + std::to_string( it->second ) + ")" );
  };

  for ( auto const& [n, line] : inputs )
  {
    declare( n, line );
    ntk.add_pi( n );
  }

  /* allocate identifiers in declaration order before wiring */
  std::vector<node_id> names_id( names.size() ), latch_id( latches.size() );
  for ( auto const& [k, idx] : order )
  {
    if ( k == 0 )
    {
      auto const& b = names[idx];
      declare( b.output, b.line );
      if ( b.inputs.size() > ps.k_max )
        throw parse_error( b.line, "LUT '" + b.output + "' has " + std::to_string( b.inputs.size() ) +
                                       " inputs, exceeding k_max = " + std::to_string( ps.k_max ) );
      names_id[idx] = ntk.add_lut( b.output, {}, truth_table( 0u ) );
    }
    else
    {
      auto const& l = latches[idx];
      declare( l.output, l.line );
      latch_id[idx] = ntk.add_latch( l.output, invalid_node, l.init, l.type, l.control );
    }
  }

  auto resolve = [&]( std::string const& n, std::size_t line ) {
    auto id = ntk.find( n );
    if ( !id )
      throw parse_error( line, "net '" + n + "' is used but never driven" );
    return *id;
  };

  for ( std::size_t i = 0; i < names.size(); ++i )
  {
    auto const& b = names[i];
    auto tt = compile_cover( b );
    auto [unique, fn] = dedupe_inputs( b.inputs, tt );
    std::vector<node_id> fanins;
    for ( auto const& n : unique )
      fanins.push_back( resolve( n, b.line ) );
    ntk.set_function( names_id[i], std::move( fanins ), std::move( fn ) );
  }
  for ( std::size_t i = 0; i < latches.size(); ++i )
    ntk.set_latch_input( latch_id[i], resolve( latches[i].input, latches[i].line ) );
  for ( auto const& [n, line] : outputs )
  {
    auto const id = resolve( n, line );
    if ( ntk.is_po( id ) )
      throw parse_error( line, "output '" + n + "' declared twice" );
    ntk.add_po( id );
  }

  try
  {
    compute_levels( ntk );
  }
  catch ( structure_error const& e )
  {
    throw parse_error( lines.empty() ? 0u : lines.front().number, e.what() );
  }
  return ntk;
}

inline netlist read_blif_string( std::string const& text, blif_read_params const& ps = {} )
{
  std::istringstream in( text );
  return read_blif( in, ps );
}

inline netlist read_blif_file( std::string const& path, blif_read_params const& ps = {} )
{
  std::ifstream in( path );
  if ( !in )
    throw error( "cannot open '" + path + "'" );
  return read_blif( in, ps );
}

namespace detail
{

/* Cover rows for an on-set; optionally merged into cubes by pairwise distance-1 merging. */
inline std::vector<std::string> cover_rows( truth_table const& tt, bool merge )
{
  auto const k = tt.num_vars();
  std::vector<std::string> cubes;
  for ( uint64_t m = 0; m < tt.num_bits(); ++m )
  {
    if ( !tt.get_bit( m ) )
      continue;
    std::string c( k, '0' );
    for ( uint32_t i = 0; i < k; ++i )
      if ( ( m >> i ) & 1u )
        c[i] = '1';
    cubes.push_back( std::move( c ) );
  }
  if ( !merge )
    return cubes;

  bool changed = true;
  while ( changed )
  {
    changed = false;
    std::vector<std::string> next;
    std::vector<uint8_t> used( cubes.size(), 0u );
    for ( std::size_t a = 0; a < cubes.size(); ++a )
      for ( std::size_t b = a + 1; b < cubes.size(); ++b )
      {
        if ( used[a] || used[b] )
          continue;
        int diff = -1, count = 0;
        for ( uint32_t i = 0; i < k && count < 2; ++i )
          if ( cubes[a][i] != cubes[b][i] )
          {
            diff = static_cast<int>( i );
            ++count;
          }
        if ( count == 1 && cubes[a][diff] != '-' && cubes[b][diff] != '-' )
        {
          auto m = cubes[a];
          m[diff] = '-';
          next.push_back( std::move( m ) );
          used[a] = used[b] = 1u;
          changed = true;
        }
      }
    for ( std::size_t a = 0; a < cubes.size(); ++a )
      if ( !used[a] )
        next.push_back( cubes[a] );
    std::sort( next.begin(), next.end() );
    next.erase( std::unique( next.begin(), next.end() ), next.end() );
    cubes = std::move( next );
  }
  return cubes;
}

inline char const* init_code( latch_init init )
{
  static char const* codes[] = { "0", "1", "2", "3" };
  return codes[static_cast<int>( init )];
}

} /* namespace detail */

/*! \brief Writes the netlist; LUTs are emitted in (level, name) order. */
inline void write_blif( netlist const& ntk, std::ostream& out, blif_write_params const& ps = {} )
{
  auto const level = compute_levels( ntk );
  std::vector<node_id> luts;
  ntk.foreach_lut( [&]( node_id id ) { luts.push_back( id ); } );
  std::sort( luts.begin(), luts.end(), [&]( node_id a, node_id b ) {
    if ( level[a] != level[b] )
      return level[a] < level[b];
    return ntk.name( a ) < ntk.name( b );
  } );

  out << ".model " << ntk.model_name() << '\n';
  out << ".inputs";
  for ( auto pi : ntk.pis() )
    out << ' ' << ntk.name( pi );
  out << '\n';
  out << ".outputs";
  for ( auto po : ntk.pos() )
    out << ' ' << ntk.name( po );
  out << '\n';
  for ( auto l : ntk.latches() )
  {
    auto const& n = ntk.get( l );
    out << ".latch " << ntk.name( n.latch.input ) << ' ' << n.name;
    if ( !n.latch.type.empty() )
      out << ' ' << n.latch.type << ' ' << n.latch.control;
    out << ' ' << detail::init_code( n.latch.init ) << '\n';
  }
  for ( auto id : luts )
  {
    auto const& n = ntk.get( id );
    out << ".names";
    for ( auto f : n.fanins )
      out << ' ' << ntk.name( f );
    out << ' ' << n.name << '\n';
    for ( auto const& row : detail::cover_rows( n.function, ps.merge_cubes ) )
    {
      if ( row.empty() )
        out << "1\n";
      else
        out << row << " 1\n";
    }
  }
  out << ".end\n";
}

inline std::string write_blif_string( netlist const& ntk, blif_write_params const& ps = {} )
{
  std::ostringstream out;
  write_blif( ntk, out, ps );
  return out.str();
}

inline void write_blif_file( netlist const& ntk, std::string const& path, blif_write_params const& ps = {} )
{
  std::ofstream out( path );
  if ( !out )
    throw error( "cannot write '" + path + "'" );
  write_blif( ntk, out, ps );
}

} /* namespace sllopt */
