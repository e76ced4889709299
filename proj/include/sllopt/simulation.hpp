/*!
  \file simulation.hpp
  \brief Single-pattern and bit-parallel simulation of netlists

  The simulation interface of a netlist lists its combinational inputs
  (primary inputs, then latch outputs) and its combinational outputs
  (primary outputs, then latch inputs).  Latch inputs are named
  `<latch output>$next` so they can be matched across netlists.
*/

#pragma once

#include "error.hpp"
#include "netlist.hpp"
#include "traversal.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sllopt
{

struct sim_interface
{
  std::vector<node_id> inputs;
  std::vector<std::string> input_names;
  std::vector<node_id> outputs;
  std::vector<std::string> output_names;
};

inline sim_interface simulation_interface( netlist const& ntk )
{
  sim_interface io;
  for ( auto pi : ntk.pis() )
  {
    io.inputs.push_back( pi );
    io.input_names.push_back( ntk.name( pi ) );
  }
  for ( auto l : ntk.latches() )
  {
    io.inputs.push_back( l );
    io.input_names.push_back( ntk.name( l ) );
  }
  for ( auto po : ntk.pos() )
  {
    io.outputs.push_back( po );
    io.output_names.push_back( ntk.name( po ) );
  }
  for ( auto l : ntk.latches() )
  {
    io.outputs.push_back( ntk.get( l ).latch.input );
    io.output_names.push_back( ntk.name( l ) + "$next" );
  }
  return io;
}

/*! \brief Simulates many patterns at once, 64 per word. */
class block_simulator
{
public:
  explicit block_simulator( netlist const& ntk )
      : ntk_( ntk ), io_( simulation_interface( ntk ) ), order_( topological_order( ntk ) )
  {
  }

  sim_interface const& interface() const { return io_; }

  /*! \brief `input_words` holds `words` consecutive words per input, in interface order. */
  void run( std::span<uint64_t const> input_words, std::size_t words )
  {
    if ( input_words.size() != io_.inputs.size() * words )
      throw error( "simulation needs " + std::to_string( io_.inputs.size() ) + " input assignments" );
    words_ = words;
    values_.assign( ntk_.size() * words, 0u );
    for ( std::size_t i = 0; i < io_.inputs.size(); ++i )
      std::copy_n( input_words.begin() + i * words, words, values_.begin() + io_.inputs[i] * words );

    std::vector<uint64_t> in;
    for ( auto id : order_ )
    {
      auto const& n = ntk_.get( id );
      in.resize( n.fanins.size() );
      auto* out = values_.data() + id * words;
      for ( std::size_t w = 0; w < words; ++w )
      {
        for ( std::size_t i = 0; i < n.fanins.size(); ++i )
          in[i] = values_[n.fanins[i] * words + w];
        out[w] = evaluate_lut_word( n.function, in );
      }
    }
  }

  std::span<uint64_t const> value( node_id id ) const
  {
    return { values_.data() + id * words_, words_ };
  }

  std::span<uint64_t const> output( std::size_t index ) const
  {
    return value( io_.outputs.at( index ) );
  }

private:
  netlist const& ntk_;
  sim_interface io_;
  std::vector<node_id> order_;
  std::size_t words_{ 0 };
  std::vector<uint64_t> values_;
};

/*! \brief Evaluates one input pattern given in interface order; returns outputs in interface order. */
inline std::vector<bool> simulate( netlist const& ntk, std::vector<bool> const& inputs )
{
  block_simulator sim( ntk );
  if ( inputs.size() != sim.interface().inputs.size() )
    throw error( "missing assignment bit: expected " + std::to_string( sim.interface().inputs.size() ) +
                 " input values, got " + std::to_string( inputs.size() ) );
  std::vector<uint64_t> words( inputs.size() );
  for ( std::size_t i = 0; i < inputs.size(); ++i )
    words[i] = inputs[i] ? 1u : 0u;
  sim.run( words, 1u );
  std::vector<bool> out;
  for ( std::size_t o = 0; o < sim.interface().outputs.size(); ++o )
    out.push_back( sim.output( o )[0] & 1u );
  return out;
}

/*! \brief Value of every node for one input pattern (interface order). */
inline std::vector<bool> simulate_nodes( netlist const& ntk, std::vector<bool> const& inputs )
{
  block_simulator sim( ntk );
  if ( inputs.size() != sim.interface().inputs.size() )
    throw error( "missing assignment bit" );
  std::vector<uint64_t> words( inputs.size() );
  for ( std::size_t i = 0; i < inputs.size(); ++i )
    words[i] = inputs[i] ? 1u : 0u;
  sim.run( words, 1u );
  std::vector<bool> values( ntk.size(), false );
  ntk.foreach_node( [&]( node_id id ) { values[id] = sim.value( id )[0] & 1u; } );
  return values;
}

} /* namespace sllopt */
