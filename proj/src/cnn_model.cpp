/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     cnn_model.cpp
    \brief    per-depth split classifier: topology, inference, training hooks and model files
*/

#include "cupart/CnnModel.hpp"
#include "cupart/Error.hpp"

#include "ByteIo.hpp"

#include <fstream>

namespace cupart
{

namespace
{

template<class... Ts>
struct Overloaded : Ts...
{
  using Ts::operator()...;
};

std::vector<int> layerOutputShape( const Layer& layer, const std::vector<int>& in )
{
  return std::visit( [&]( const auto& l ) { return l.outputShape( in ); }, layer );
}

Tensor layerForward( const Layer& layer, const Tensor& in )
{
  return std::visit( [&]( const auto& l ) { return l.forward( in ); }, layer );
}

LayerSpec pool2x2()
{
  return { LayerKind::MaxPool, 2, 2, 2, Padding::Valid, 256, 256 };
}

} // namespace

LayerSpec layerSpec( const Layer& layer )
{
  return std::visit( []( const auto& l ) { return l.spec(); }, layer );
}

CnnModel::CnnModel( int cuSize, std::vector<Layer> layers ) : m_cuSize( cuSize ), m_layers( std::move( layers ) )
{
  if( !isDecisionSize( cuSize ) )
  {
    throw ShapeError( "CNN models exist for CU sizes 64, 32 and 16 only" );
  }
  const auto trace = shapeTrace( 1 );
  if( trace.back() != std::vector<int>{ 1, 2 } )
  {
    throw ShapeError( "model output must be two class probabilities" );
  }
  headIndex();
}

size_t CnnModel::headIndex() const
{
  for( size_t i = 0; i < m_layers.size(); i++ )
  {
    if( layerSpec( m_layers[i] ).kind == LayerKind::AvgPool )
    {
      return i;
    }
  }
  throw ShapeError( "model has no average-pool head" );
}

std::vector<std::vector<int>> CnnModel::shapeTrace( int batch ) const
{
  std::vector<std::vector<int>> trace{ { batch, 1, m_cuSize, m_cuSize } };
  for( const auto& layer: m_layers )
  {
    trace.push_back( layerOutputShape( layer, trace.back() ) );
  }
  return trace;
}

Tensor CnnModel::forward( const Tensor& input ) const
{
  Tensor x = input;
  for( const auto& layer: m_layers )
  {
    x = layerForward( layer, x );
  }
  return x;
}

Tensor CnnModel::features( const Tensor& input ) const
{
  const size_t head = headIndex();
  Tensor       x    = input;
  for( size_t i = 0; i < head; i++ )
  {
    x = layerForward( m_layers[i], x );
  }
  return x;
}

Tensor CnnModel::forwardTrain( const Tensor& input )
{
  Tensor x = input;
  for( auto& layer: m_layers )
  {
    x = std::visit( [&]( auto& l ) { return l.forwardTrain( x ); }, layer );
  }
  return x;
}

void CnnModel::backward( const Tensor& probabilityGrad )
{
  Tensor g = probabilityGrad;
  for( size_t i = m_layers.size(); i-- > 0; )
  {
    const bool first = i == 0;
    g = std::visit( Overloaded{ [&]( ConvLayer& l ) { return l.backward( g, !first ); },
                                [&]( auto& l ) { return l.backward( g ); } },
                    m_layers[i] );
  }
}

std::vector<ParamRef> CnnModel::parameters()
{
  std::vector<ParamRef> params;
  for( size_t i = 0; i < m_layers.size(); i++ )
  {
    const std::string prefix = "layer" + std::to_string( i );
    std::visit( Overloaded{ [&]( ConvLayer& l ) { l.collectParameters( params, prefix ); },
                            [&]( InceptionLayer& l ) { l.collectParameters( params, prefix ); },
                            [&]( DenseLayer& l ) { l.collectParameters( params, prefix ); },
                            []( auto& ) {} },
                m_layers[i] );
  }
  return params;
}

size_t CnnModel::parameterCount() const
{
  size_t count = 0;
  for( const auto& p: const_cast<CnnModel*>( this )->parameters() )
  {
    count += p.value->size();
  }
  return count;
}

void CnnModel::zeroGrad()
{
  for( auto& p: parameters() )
  {
    p.grad->fill( 0.0 );
  }
}

void CnnModel::sgdStep( double learningRate )
{
  for( auto& p: parameters() )
  {
    double*       v = p.value->data();
    const double* g = p.grad->data();
    for( size_t i = 0; i < p.value->size(); i++ )
    {
      v[i] -= learningRate * g[i];
    }
  }
}

std::vector<uint8_t> CnnModel::activationPattern() const
{
  std::vector<uint8_t> pattern;
  for( const auto& layer: m_layers )
  {
    std::visit( Overloaded{ [&]( const ConvLayer& l ) { l.appendReluPattern( pattern ); },
                            [&]( const PoolLayer& l ) { l.appendArgmaxPattern( pattern ); },
                            [&]( const InceptionLayer& l ) { l.appendActivationPattern( pattern ); },
                            []( const auto& ) {} },
                layer );
  }
  return pattern;
}

SplitProbability CnnModel::predict( const LumaBlock& block ) const
{
  return predict( std::vector<const LumaBlock*>{ &block } ).front();
}

std::vector<SplitProbability> CnnModel::predict( const std::vector<const LumaBlock*>& blocks ) const
{
  std::vector<SplitProbability> result;
  if( blocks.empty() )
  {
    return result;
  }
  const Tensor probs = forward( makeInputBatch( blocks, m_cuSize ) );
  for( size_t n = 0; n < blocks.size(); n++ )
  {
    result.push_back( { probs[2 * n], probs[2 * n + 1] } );
  }
  return result;
}

// ---------------------------------------------------------------------------------------------

CnnModel buildTopology( int cuSize, uint64_t seed )
{
  if( !isDecisionSize( cuSize ) )
  {
    throw ShapeError( "no topology for CU size " + std::to_string( cuSize ) );
  }
  // stride-2 pool after Inception i (1-based) when poolAfter[i - 1] is set
  bool poolAfter[4] = {};
  switch( cuSize )
  {
  case 64: poolAfter[0] = poolAfter[1] = poolAfter[2] = true; break;
  case 32: poolAfter[0] = poolAfter[2] = true; break;
  default: poolAfter[1] = true; break;
  }

  std::vector<Layer> layers;
  layers.emplace_back( ConvLayer( { LayerKind::Conv, 3, 3, 1, Padding::Same, 1, 32 } ) );
  int channels = 32;
  for( int i = 0; i < 4; i++ )
  {
    InceptionConfig config;
    config.inChannels = channels;
    layers.emplace_back( InceptionLayer( config ) );
    channels = config.outChannels();
    if( poolAfter[i] )
    {
      layers.emplace_back( PoolLayer( pool2x2() ) );
    }
  }
  if( cuSize == 64 )
  {
    layers.emplace_back( PoolLayer( { LayerKind::MaxPool, 3, 3, 1, Padding::Same, 256, 256 } ) );
  }
  layers.emplace_back( PoolLayer( { LayerKind::AvgPool, 8, 8, 1, Padding::Valid, 256, 256 } ) );
  layers.emplace_back( DenseLayer( 256, 2 ) );
  layers.emplace_back( SoftmaxLayer( 2 ) );

  Rng rng( seed );
  for( auto& layer: layers )
  {
    std::visit( Overloaded{ [&]( ConvLayer& l ) { l.initialize( rng ); },
                            [&]( InceptionLayer& l ) { l.initialize( rng ); },
                            [&]( DenseLayer& l ) { l.initialize( rng ); },
                            []( auto& ) {} },
                layer );
  }
  return CnnModel( cuSize, std::move( layers ) );
}

Tensor makeInputBatch( const std::vector<const LumaBlock*>& blocks, int cuSize )
{
  const auto n = static_cast<int>( blocks.size() );
  Tensor     input( { n, 1, cuSize, cuSize } );
  size_t     o = 0;
  for( const auto* block: blocks )
  {
    if( block->size != cuSize )
    {
      throw ShapeError( "block of size " + std::to_string( block->size ) + " given to a " + std::to_string( cuSize )
                        + "x" + std::to_string( cuSize ) + " model" );
    }
    for( const uint8_t s: block->samples )
    {
      input[o++] = s / 255.0;
    }
  }
  return input;
}

// ---------------------------------------------------------------------------------------------
// model files

namespace
{

using detail::getF64;
using detail::getLe;
using detail::putF64;
using detail::putLe;

std::vector<int> specInts( const Layer& layer )
{
  return std::visit(
    Overloaded{ []( const ConvLayer& l ) {
                 const auto& s = l.spec();
                 return std::vector<int>{ s.kernelW, s.kernelH, s.stride, static_cast<int>( s.padding ),
                                          s.inChannels, s.outChannels, l.relu() ? 1 : 0 };
               },
                []( const PoolLayer& l ) {
                  const auto& s = l.spec();
                  return std::vector<int>{ s.kernelW, s.kernelH, s.stride, static_cast<int>( s.padding ),
                                           s.inChannels };
                },
                []( const InceptionLayer& l ) {
                  const auto& c = l.config();
                  return std::vector<int>{ c.inChannels, c.branch1x1, c.reduce3x3, c.branch3x3,
                                           c.reduce5x5,  c.branch5x5, c.poolProjection };
                },
                []( const DenseLayer& l ) {
                  const auto s = l.spec();
                  return std::vector<int>{ s.inChannels, s.outChannels };
                },
                []( const SoftmaxLayer& l ) { return std::vector<int>{ l.spec().outChannels }; } },
    layer );
}

std::vector<ParamRef> layerParameters( Layer& layer )
{
  std::vector<ParamRef> params;
  std::visit( Overloaded{ [&]( ConvLayer& l ) { l.collectParameters( params, "" ); },
                          [&]( InceptionLayer& l ) { l.collectParameters( params, "" ); },
                          [&]( DenseLayer& l ) { l.collectParameters( params, "" ); },
                          []( auto& ) {} },
              layer );
  return params;
}

void requireCount( const std::vector<int>& ints, size_t count, const char* kind )
{
  if( ints.size() != count )
  {
    throw FormatError( std::string( kind ) + " layer record has the wrong number of spec fields" );
  }
}

Padding paddingFrom( int value )
{
  if( value != 0 && value != 1 )
  {
    throw FormatError( "unknown padding code" );
  }
  return static_cast<Padding>( value );
}

Layer layerFromRecord( uint8_t kind, const std::vector<int>& v )
{
  switch( static_cast<LayerKind>( kind ) )
  {
  case LayerKind::Conv:
    requireCount( v, 7, "Conv" );
    return ConvLayer( { LayerKind::Conv, v[0], v[1], v[2], paddingFrom( v[3] ), v[4], v[5] }, v[6] != 0 );
  case LayerKind::MaxPool:
  case LayerKind::AvgPool:
    requireCount( v, 5, "pool" );
    return PoolLayer( { static_cast<LayerKind>( kind ), v[0], v[1], v[2], paddingFrom( v[3] ), v[4], v[4] } );
  case LayerKind::Inception:
    requireCount( v, 7, "Inception" );
    return InceptionLayer( { v[0], v[1], v[2], v[3], v[4], v[5], v[6] } );
  case LayerKind::FullyConnected:
    requireCount( v, 2, "FullyConnected" );
    return DenseLayer( v[0], v[1] );
  case LayerKind::Softmax:
    requireCount( v, 1, "Softmax" );
    return SoftmaxLayer( v[0] );
  }
  throw FormatError( "unknown layer kind " + std::to_string( kind ) );
}

} // namespace

void writeModel( std::ostream& out, const CnnModel& model )
{
  out.write( "CUPM", 4 );
  putLe<uint16_t>( out, CnnModel::kFormatVersion );
  putLe<uint16_t>( out, static_cast<uint16_t>( model.cuSize() ) );
  putLe<uint32_t>( out, static_cast<uint32_t>( model.layers().size() ) );
  for( const auto& constLayer: model.layers() )
  {
    auto& layer = const_cast<Layer&>( constLayer );
    putLe<uint8_t>( out, static_cast<uint8_t>( layerSpec( layer ).kind ) );
    const auto ints = specInts( layer );
    putLe<uint32_t>( out, static_cast<uint32_t>( ints.size() ) );
    for( const int v: ints )
    {
      putLe<uint32_t>( out, static_cast<uint32_t>( v ) );
    }
    const auto params = layerParameters( layer );
    putLe<uint32_t>( out, static_cast<uint32_t>( params.size() ) );
    for( const auto& p: params )
    {
      putLe<uint32_t>( out, static_cast<uint32_t>( p.value->rank() ) );
      for( const int d: p.value->shape() )
      {
        putLe<uint32_t>( out, static_cast<uint32_t>( d ) );
      }
      for( const double v: p.value->values() )
      {
        putF64( out, v );
      }
    }
  }
  if( !out )
  {
    throw Error( "failed writing model" );
  }
}

CnnModel readModel( std::istream& in )
{
  detail::expectMagic( in, "CUPM" );
  const auto version = getLe<uint16_t>( in, "model version" );
  if( version != CnnModel::kFormatVersion )
  {
    throw FormatError( "unsupported model version " + std::to_string( version ) );
  }
  const int  cuSize = getLe<uint16_t>( in, "model cu size" );
  const auto count  = getLe<uint32_t>( in, "layer count" );
  if( count > 1024 )
  {
    throw FormatError( "implausible layer count" );
  }
  std::vector<Layer> layers;
  for( uint32_t i = 0; i < count; i++ )
  {
    const auto kind   = getLe<uint8_t>( in, "layer kind" );
    const auto nInts  = getLe<uint32_t>( in, "spec field count" );
    if( nInts > 64 )
    {
      throw FormatError( "implausible spec field count" );
    }
    std::vector<int> ints( nInts );
    for( auto& v: ints )
    {
      v = static_cast<int>( getLe<uint32_t>( in, "spec field" ) );
    }
    Layer layer = [&] {
      try
      {
        return layerFromRecord( kind, ints );
      }
      catch( const ShapeError& e )
      {
        throw FormatError( std::string( "invalid layer record: " ) + e.what() );
      }
    }();
    auto       params  = layerParameters( layer );
    const auto nParams = getLe<uint32_t>( in, "tensor count" );
    if( nParams != params.size() )
    {
      throw FormatError( "layer " + std::to_string( i ) + " stores " + std::to_string( nParams )
                         + " tensors, expected " + std::to_string( params.size() ) );
    }
    for( auto& p: params )
    {
      const auto       rank = getLe<uint32_t>( in, "tensor rank" );
      std::vector<int> shape;
      for( uint32_t r = 0; r < rank && r < 8; r++ )
      {
        shape.push_back( static_cast<int>( getLe<uint32_t>( in, "tensor dim" ) ) );
      }
      if( shape != p.value->shape() )
      {
        throw FormatError( "tensor shape in file does not match the layer spec" );
      }
      for( auto& v: p.value->values() )
      {
        v = getF64( in, "tensor data" );
      }
      requireFinite( *p.value, "model file" );
    }
    layers.push_back( std::move( layer ) );
  }
  try
  {
    return CnnModel( cuSize, std::move( layers ) );
  }
  catch( const ShapeError& e )
  {
    throw FormatError( std::string( "model topology is inconsistent: " ) + e.what() );
  }
}

void saveModel( const std::filesystem::path& path, const CnnModel& model )
{
  std::ofstream out( path, std::ios::binary );
  if( !out )
  {
    throw Error( "cannot open " + path.string() + " for writing" );
  }
  writeModel( out, model );
}

CnnModel loadModel( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  if( !in )
  {
    throw Error( "cannot open " + path.string() );
  }
  return readModel( in );
}

} // namespace cupart
