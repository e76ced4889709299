/*!
  \file care_set.hpp
  \brief Exhaustive window simulation and observability care sets
*/

#pragma once

#include "../error.hpp"
#include "../netlist.hpp"
#include "../simulation.hpp"
#include "../truth_table.hpp"
#include "window.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace sllopt
{

/*! \brief Truth table of every window signal over the window PIs. */
class window_simulation
{
public:
  window_simulation( netlist const& ntk, window const& w ) : ntk_( ntk ), w_( w )
  {
    auto const n = static_cast<uint32_t>( w.pis.size() );
    for ( uint32_t i = 0; i < n; ++i )
      values_.emplace( w.pis[i], truth_table::nth_var( n, i ) );
    for ( auto id : w.nodes )
      values_.emplace( id, evaluate( id, {} ) );
  }

  uint32_t num_vars() const { return static_cast<uint32_t>( w_.pis.size() ); }

  truth_table const& value( node_id id ) const
  {
    auto it = values_.find( id );
    if ( it == values_.end() )
      throw error( "signal '" + ntk_.name( id ) + "' is not in the window" );
    return it->second;
  }

  bool has( node_id id ) const { return values_.contains( id ); }

  /*! \brief Window outputs with the pivot replaced by `pivot_value`. */
  std::vector<truth_table> outputs_with( truth_table const& pivot_value ) const
  {
    std::unordered_map<node_id, truth_table> over{ { w_.pivot, pivot_value } };
    for ( auto id : w_.tfo )
      over.insert_or_assign( id, evaluate( id, over ) );
    std::vector<truth_table> out;
    for ( auto o : w_.outputs )
    {
      auto it = over.find( o );
      out.push_back( it != over.end() ? it->second : value( o ) );
    }
    return out;
  }

private:
  truth_table evaluate( node_id id, std::unordered_map<node_id, truth_table> const& over ) const
  {
    auto const& n = ntk_.get( id );
    std::vector<truth_table const*> in;
    for ( auto f : n.fanins )
    {
      auto it = over.find( f );
      in.push_back( it != over.end() ? &it->second : &value( f ) );
    }
    return evaluate_lut( n.function, in, num_vars() );
  }

  netlist const& ntk_;
  window const& w_;
  std::unordered_map<node_id, truth_table> values_;
};

/*! \brief Single-output predicate over named primary inputs. */
struct care_predicate
{
  netlist circuit;

  /*! \brief Value over the window PIs, or nullopt when a predicate input is not a window PI. */
  std::optional<truth_table> over_window( netlist const& ntk, window const& w ) const
  {
    auto const n = static_cast<uint32_t>( w.pis.size() );
    auto const io = simulation_interface( circuit );
    std::vector<truth_table> inputs;
    for ( auto const& name : io.input_names )
    {
      auto id = ntk.find( name );
      if ( !id )
        return std::nullopt;
      auto idx = w.pi_index( *id );
      if ( idx < 0 )
        return std::nullopt;
      inputs.push_back( truth_table::nth_var( n, static_cast<uint32_t>( idx ) ) );
    }
    return evaluate_on( inputs, n );
  }

  /*! \brief Evaluates the predicate for inputs given as truth tables in interface order. */
  truth_table evaluate_on( std::vector<truth_table> const& inputs, uint32_t num_vars ) const
  {
    auto const io = simulation_interface( circuit );
    if ( io.outputs.size() != 1u )
      throw error( "care predicate must have exactly one output" );
    std::vector<truth_table> value( circuit.size(), truth_table::constant( num_vars, false ) );
    for ( std::size_t i = 0; i < io.inputs.size(); ++i )
      value[io.inputs[i]] = inputs.at( i );
    for ( auto id : topological_order( circuit ) )
    {
      std::vector<truth_table const*> in;
      for ( auto f : circuit.get( id ).fanins )
        in.push_back( &value[f] );
      value[id] = evaluate_lut( circuit.get( id ).function, in, num_vars );
    }
    return value[io.outputs[0]];
  }
};

/*! \brief Care minterms of the pivot over the window PIs.
 *
 * A minterm is care iff forcing the pivot to 0 and to 1 yields different
 * values on some window output.  The predicate, when given and expressible
 * over the window PIs, is intersected in.
 */
inline truth_table extract_care_set( netlist const& ntk, window const& w, window_simulation const& sim,
                                     care_predicate const* predicate = nullptr )
{
  auto const n = sim.num_vars();
  auto const out0 = sim.outputs_with( truth_table::constant( n, false ) );
  auto const out1 = sim.outputs_with( truth_table::constant( n, true ) );
  auto care = truth_table::constant( n, false );
  for ( std::size_t i = 0; i < out0.size(); ++i )
    care |= out0[i] ^ out1[i];
  if ( predicate )
    if ( auto p = predicate->over_window( ntk, w ) )
      care &= *p;
  return care;
}

} /* namespace sllopt */
