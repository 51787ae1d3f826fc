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

/** \file     pipeline.cpp
    \brief    two-stage CU partition decision: range filter, then per-depth split classifier
*/

#include "cupart/Pipeline.hpp"
#include "cupart/Error.hpp"
#include "cupart/Parallel.hpp"

#include <ostream>

namespace cupart
{

std::optional<CnnModel>& ModelSet::forSize( int size )
{
  switch( size )
  {
  case 64: return cu64;
  case 32: return cu32;
  case 16: return cu16;
  }
  throw Error( "no model slot for CU size " + std::to_string( size ) );
}

const std::optional<CnnModel>& ModelSet::forSize( int size ) const
{
  return const_cast<ModelSet*>( this )->forSize( size );
}

std::filesystem::path modelFileName( int cuSize )
{
  return "cu" + std::to_string( cuSize ) + ".cupm";
}

ModelSet loadModelSet( const std::filesystem::path& dir )
{
  if( !std::filesystem::is_directory( dir ) )
  {
    throw Error( "model directory " + dir.string() + " does not exist" );
  }
  ModelSet models;
  for( const int size: { 64, 32, 16 } )
  {
    const auto path = dir / modelFileName( size );
    if( !std::filesystem::exists( path ) )
    {
      throw Error( "missing model " + path.string() );
    }
    models.forSize( size ) = loadModel( path );
  }
  return models;
}

void saveModelSet( const std::filesystem::path& dir, const ModelSet& models )
{
  std::filesystem::create_directories( dir );
  for( const int size: { 64, 32, 16 } )
  {
    if( models.forSize( size ) )
    {
      saveModel( dir / modelFileName( size ), *models.forSize( size ) );
    }
  }
}

CnnClassifier::CnnClassifier( ModelSet models ) : m_models( std::move( models ) )
{
  for( const int size: { 64, 32, 16 } )
  {
    const auto& model = m_models.forSize( size );
    if( !model )
    {
      throw Error( "no CNN for " + std::to_string( size ) + "x" + std::to_string( size ) + " CUs" );
    }
    if( model->cuSize() != size )
    {
      throw Error( "model in the " + std::to_string( size ) + " slot was built for size "
                   + std::to_string( model->cuSize() ) );
    }
  }
}

double CnnClassifier::splitProbability( const LumaBlock& block ) const
{
  return m_models.forSize( block.size )->predict( block ).split;
}

double OracleClassifier::splitProbability( const LumaBlock& block ) const
{
  return labelPartition( block, m_qp ).split ? 1.0 : 0.0;
}

const char* stageName( DecisionStage stage )
{
  switch( stage )
  {
  case DecisionStage::EarlyTerminated: return "EarlyTerminated";
  case DecisionStage::CnnNonSplit: return "CnnNonSplit";
  case DecisionStage::CnnSplit: return "CnnSplit";
  case DecisionStage::ForcedLeaf: return "ForcedLeaf";
  }
  return "?";
}

namespace
{

PartitionTree decideNode( const LumaBlock& block, const SplitClassifier& classifier, const PipelineConfig& config,
                          CtuDecision& out, const BlockOrigin& ctu )
{
  PartitionTree node;
  node.size = block.size;
  node.x    = block.origin.x;
  node.y    = block.origin.y;

  TraceNode trace;
  trace.frame = ctu.frameIndex;
  trace.ctuX  = ctu.x;
  trace.ctuY  = ctu.y;
  trace.size  = block.size;
  trace.x     = block.origin.x;
  trace.y     = block.origin.y;

  if( block.size == kMinCuSize )
  {
    out.trace.push_back( trace );
    return node;
  }
  if( earlyTerminate( block, config.thresholds ) == FilterDecision::Terminate )
  {
    trace.stage = DecisionStage::EarlyTerminated;
    out.trace.push_back( trace );
    return node;
  }
  const double p = classifier.splitProbability( block );
  out.classifierCalls++;
  node.split   = p > config.tau;
  trace.stage  = node.split ? DecisionStage::CnnSplit : DecisionStage::CnnNonSplit;
  trace.pSplit = p;
  out.trace.push_back( trace );
  if( node.split )
  {
    for( int q = 0; q < 4; q++ )
    {
      node.children.push_back( decideNode( quadrant( block, q ), classifier, config, out, ctu ) );
    }
  }
  return node;
}

} // namespace

CtuDecision decideCtu( const LumaBlock& ctu, const SplitClassifier& classifier, const PipelineConfig& config )
{
  if( ctu.size != kCtuSize )
  {
    throw ShapeError( "decideCtu needs a 64x64 CTU" );
  }
  if( !( config.tau > 0.0 && config.tau < 1.0 ) )
  {
    throw Error( "tau must lie strictly between 0 and 1" );
  }
  CtuDecision decision;
  decision.tree = decideNode( ctu, classifier, config, decision, ctu.origin );
  return decision;
}

double FrameDecision::earlyTerminatedFraction( int size ) const
{
  size_t visited = 0, terminated = 0;
  for( const auto& node: trace )
  {
    if( node.stage == DecisionStage::ForcedLeaf || ( size && node.size != size ) )
    {
      continue;
    }
    visited++;
    terminated += node.stage == DecisionStage::EarlyTerminated;
  }
  return visited ? static_cast<double>( terminated ) / static_cast<double>( visited ) : 0.0;
}

FrameDecision decideFrame( const Frame& frame, const SplitClassifier& classifier, const PipelineConfig& config,
                           int threads )
{
  const size_t             columns = frame.ctuColumns();
  const size_t             count   = columns * frame.ctuRows();
  std::vector<CtuDecision> ctus( count );
  parallelFor( count, threads, [&]( size_t i ) {
    const auto block = extractBlock( frame, static_cast<int>( i % columns ) * kCtuSize,
                                     static_cast<int>( i / columns ) * kCtuSize, kCtuSize );
    ctus[i] = decideCtu( block, classifier, config );
  } );
  FrameDecision result;
  result.frame = frame.index;
  for( auto& ctu: ctus )
  {
    result.trees.push_back( std::move( ctu.tree ) );
    result.trace.insert( result.trace.end(), ctu.trace.begin(), ctu.trace.end() );
    result.classifierCalls += ctu.classifierCalls;
  }
  return result;
}

void writePartitions( std::ostream& out, std::span<const FrameDecision> decisions )
{
  for( const auto& frame: decisions )
  {
    for( const auto& tree: frame.trees )
    {
      out << frame.frame << ' ' << tree.x << ' ' << tree.y << ' ' << serializeFlags( tree ) << '\n';
    }
  }
}

void writeTraceCsv( std::ostream& out, std::span<const FrameDecision> decisions )
{
  out << "frame,ctu_x,ctu_y,size,x,y,stage,p_split\n";
  out.precision( 17 );
  for( const auto& frame: decisions )
  {
    for( const auto& node: frame.trace )
    {
      out << node.frame << ',' << node.ctuX << ',' << node.ctuY << ',' << node.size << ',' << node.x << ',' << node.y
          << ',' << stageName( node.stage ) << ',';
      if( node.pSplit )
      {
        out << *node.pSplit;
      }
      out << '\n';
    }
  }
}

} // namespace cupart
