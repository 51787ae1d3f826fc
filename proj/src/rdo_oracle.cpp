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

/** \file     rdo_oracle.cpp
    \brief    simplified intra rate-distortion model and exhaustive quad-tree split labeling
*/

#include "cupart/RdoOracle.hpp"
#include "cupart/Error.hpp"
#include "cupart/Parallel.hpp"
#include "ByteIo.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cupart
{

namespace
{

void checkQp( int qp )
{
  if( qp < 0 || qp > 51 )
  {
    throw Error( "QP out of range [0, 51]: " + std::to_string( qp ) );
  }
}

void collectFlags( const PartitionTree& node, std::string& out )
{
  if( !isDecisionSize( node.size ) )
  {
    return;
  }
  if( !out.empty() )
  {
    out.push_back( ' ' );
  }
  out.push_back( node.split ? '1' : '0' );
  for( const auto& child: node.children )
  {
    collectFlags( child, out );
  }
}

PartitionTree parseNode( const std::vector<int>& flags, size_t& pos, int size, int x, int y )
{
  PartitionTree node;
  node.size = size;
  node.x    = x;
  node.y    = y;
  if( !isDecisionSize( size ) )
  {
    return node;
  }
  if( pos >= flags.size() )
  {
    throw FormatError( "partition flags end early" );
  }
  node.split = flags[pos++] != 0;
  if( node.split )
  {
    const int half = size / 2;
    for( int q = 0; q < 4; q++ )
    {
      node.children.push_back( parseNode( flags, pos, half, x + ( q & 1 ) * half, y + ( q >> 1 ) * half ) );
    }
  }
  return node;
}

void appendLabels( const RdNode& node, LabeledCorpus& corpus, const LumaBlock& block )
{
  if( !isDecisionSize( node.size ) )
  {
    return;
  }
  corpus.forSize( node.size ).push_back( { block, static_cast<uint8_t>( node.split ) } );
  for( int q = 0; q < 4; q++ )
  {
    appendLabels( node.children[q], corpus, quadrant( block, q ) );
  }
}

} // namespace

double lambdaForQp( int qp )
{
  checkQp( qp );
  return 0.57 * std::pow( 2.0, ( qp - 12 ) / 3.0 );
}

double quantStep( int qp )
{
  checkQp( qp );
  return std::pow( 2.0, ( qp - 4 ) / 6.0 );
}

RdCost& RdCost::operator+=( const RdCost& other )
{
  distortion += other.distortion;
  rate += other.rate;
  lambda = other.lambda;
  return *this;
}

RdCost operator+( RdCost a, const RdCost& b )
{
  a += b;
  return a;
}

const char* intraModeName( IntraMode mode )
{
  switch( mode )
  {
  case IntraMode::Dc: return "DC";
  case IntraMode::Planar: return "Planar";
  case IntraMode::Horizontal: return "Horizontal";
  case IntraMode::Vertical: return "Vertical";
  }
  return "?";
}

std::vector<int> predictIntra( IntraMode mode, const IntraRefs& refs, int size )
{
  if( !isCuSize( size ) || refs.top.size() != static_cast<size_t>( size ) || refs.left.size() != static_cast<size_t>( size ) )
  {
    throw ShapeError( "prediction references do not match block size" );
  }
  const int        log2Size = std::countr_zero( static_cast<unsigned>( size ) );
  std::vector<int> pred( static_cast<size_t>( size ) * size );
  switch( mode )
  {
  case IntraMode::Dc:
  {
    int sum = 0;
    for( int i = 0; i < size; i++ )
    {
      sum += refs.top[i] + refs.left[i];
    }
    std::fill( pred.begin(), pred.end(), ( sum + size ) >> ( log2Size + 1 ) );
    break;
  }
  case IntraMode::Planar:
  {
    const int topRight   = refs.top[size - 1];
    const int bottomLeft = refs.left[size - 1];
    for( int y = 0; y < size; y++ )
    {
      for( int x = 0; x < size; x++ )
      {
        const int horz = ( size - 1 - x ) * refs.left[y] + ( x + 1 ) * topRight;
        const int vert = ( size - 1 - y ) * refs.top[x] + ( y + 1 ) * bottomLeft;
        pred[static_cast<size_t>( y ) * size + x] = ( horz + vert + size ) >> ( log2Size + 1 );
      }
    }
    break;
  }
  case IntraMode::Horizontal:
    for( int y = 0; y < size; y++ )
    {
      std::fill_n( pred.begin() + static_cast<ptrdiff_t>( y ) * size, size, refs.left[y] );
    }
    break;
  case IntraMode::Vertical:
    for( int y = 0; y < size; y++ )
    {
      for( int x = 0; x < size; x++ )
      {
        pred[static_cast<size_t>( y ) * size + x] = refs.top[x];
      }
    }
    break;
  }
  return pred;
}

uint64_t levelBits( int64_t level )
{
  if( level == 0 )
  {
    return 0;
  }
  const auto magnitude = static_cast<uint64_t>( level < 0 ? -level : level );
  return 2 * static_cast<uint64_t>( std::bit_width( magnitude ) - 1 ) + 2;
}

namespace
{

// rows are the orthonormal DCT-II basis functions
const std::vector<double>& dctBasis( int n )
{
  static const auto make = []( int size ) {
    std::vector<double> m( static_cast<size_t>( size ) * size );
    for( int k = 0; k < size; k++ )
    {
      const double scale = std::sqrt( ( k == 0 ? 1.0 : 2.0 ) / size );
      for( int i = 0; i < size; i++ )
      {
        m[static_cast<size_t>( k ) * size + i] = scale * std::cos( std::numbers::pi * ( 2 * i + 1 ) * k / ( 2.0 * size ) );
      }
    }
    return m;
  };
  static const std::vector<double> b4 = make( 4 ), b8 = make( 8 ), b16 = make( 16 ), b32 = make( 32 );
  switch( n )
  {
  case 4: return b4;
  case 8: return b8;
  case 16: return b16;
  case 32: return b32;
  default: throw ShapeError( "no DCT for size " + std::to_string( n ) );
  }
}

} // namespace

ResidualCoding codeResidual( std::span<const int> residual, int size, int qp )
{
  if( residual.size() != static_cast<size_t>( size ) * size )
  {
    throw ShapeError( "residual length does not match block size" );
  }
  const int    tu    = std::min( size, kMaxTuSize );
  const auto&  basis = dctBasis( tu );
  const double step  = quantStep( qp );

  ResidualCoding      coded;
  std::vector<double> rows( static_cast<size_t>( tu ) * tu );
  for( int ty = 0; ty < size; ty += tu )
  {
    for( int tx = 0; tx < size; tx += tu )
    {
      // vertical pass: rows[k][x] = sum_y basis[k][y] * r[y][x]
      for( int k = 0; k < tu; k++ )
      {
        for( int x = 0; x < tu; x++ )
        {
          double acc = 0.0;
          for( int y = 0; y < tu; y++ )
          {
            acc += basis[static_cast<size_t>( k ) * tu + y] * residual[static_cast<size_t>( ty + y ) * size + tx + x];
          }
          rows[static_cast<size_t>( k ) * tu + x] = acc;
        }
      }
      // horizontal pass and quantization
      for( int k = 0; k < tu; k++ )
      {
        for( int l = 0; l < tu; l++ )
        {
          double coeff = 0.0;
          for( int x = 0; x < tu; x++ )
          {
            coeff += rows[static_cast<size_t>( k ) * tu + x] * basis[static_cast<size_t>( l ) * tu + x];
          }
          const double magnitude = std::fabs( coeff );
          const auto   level     = static_cast<int64_t>( std::floor( magnitude / step + kQuantRoundingOffset ) );
          const double error     = magnitude - static_cast<double>( level ) * step;
          coded.distortion += error * error;
          coded.bits += levelBits( level );
        }
      }
    }
  }
  return coded;
}

IntraCostResult intraSearch( const LumaBlock& block, QpConfig qp )
{
  if( !isCuSize( block.size ) )
  {
    throw ShapeError( "intra cost needs a CU size, got " + std::to_string( block.size ) );
  }
  const double     lambda = lambdaForQp( qp.qp );
  const int        count  = block.size * block.size;
  std::vector<int> residual( count );

  IntraCostResult best;
  bool            first = true;
  for( const IntraMode mode: kIntraModes )
  {
    const auto pred = predictIntra( mode, block.refs, block.size );
    for( int i = 0; i < count; i++ )
    {
      residual[i] = static_cast<int>( block.samples[i] ) - pred[i];
    }
    const auto coded = codeResidual( residual, block.size, qp.qp );

    RdCost cost;
    cost.distortion = static_cast<uint64_t>( std::llround( coded.distortion ) );
    cost.rate       = kHeaderBits + coded.bits;
    cost.lambda     = lambda;
    if( first || cost.cost() < best.cost.cost() )
    {
      best  = { cost, mode };
      first = false;
    }
  }
  return best;
}

RdCost intraCost( const LumaBlock& block, QpConfig qp )
{
  return intraSearch( block, qp ).cost;
}

size_t PartitionTree::splitCount() const
{
  size_t count = split ? 1 : 0;
  for( const auto& child: children )
  {
    count += child.splitCount();
  }
  return count;
}

size_t PartitionTree::nodeCount() const
{
  size_t count = 1;
  for( const auto& child: children )
  {
    count += child.nodeCount();
  }
  return count;
}

bool PartitionTree::isValid() const
{
  if( !isCuSize( size ) || x % size || y % size )
  {
    return false;
  }
  if( !split )
  {
    return children.empty();
  }
  if( !isDecisionSize( size ) || children.size() != 4 )
  {
    return false;
  }
  const int half = size / 2;
  for( int q = 0; q < 4; q++ )
  {
    const auto& c = children[q];
    if( c.size != half || c.x != x + ( q & 1 ) * half || c.y != y + ( q >> 1 ) * half || !c.isValid() )
    {
      return false;
    }
  }
  return true;
}

std::string serializeFlags( const PartitionTree& tree )
{
  std::string out;
  collectFlags( tree, out );
  return out;
}

PartitionTree parseFlags( const std::string& flags, int size, int x, int y )
{
  std::istringstream in( flags );
  std::vector<int>   values;
  std::string        token;
  while( in >> token )
  {
    if( token != "0" && token != "1" )
    {
      throw FormatError( "partition flag must be 0 or 1, got '" + token + "'" );
    }
    values.push_back( token == "1" );
  }
  size_t pos  = 0;
  auto   tree = parseNode( values, pos, size, x, y );
  if( pos != values.size() )
  {
    throw FormatError( "trailing partition flags" );
  }
  return tree;
}

RdNode rdQuadTreeSearch( const LumaBlock& block, QpConfig qp )
{
  RdNode node;
  node.size  = block.size;
  node.origin = block.origin;
  node.whole = intraSearch( block, qp );
  node.best  = node.whole.cost;
  if( !isDecisionSize( block.size ) )
  {
    return node;
  }

  RdCost splitCost;
  splitCost.lambda = node.whole.cost.lambda;
  splitCost.rate   = kSplitFlagBits;
  for( int q = 0; q < 4; q++ )
  {
    node.children.push_back( rdQuadTreeSearch( quadrant( block, q ), qp ) );
    splitCost += node.children.back().best;
  }
  node.split = node.whole.cost.cost() > splitCost.cost();
  if( node.split )
  {
    node.best = splitCost;
  }
  return node;
}

PartitionTree toPartitionTree( const RdNode& node )
{
  PartitionTree tree;
  tree.size  = node.size;
  tree.x     = node.origin.x;
  tree.y     = node.origin.y;
  tree.split = node.split;
  if( node.split )
  {
    for( const auto& child: node.children )
    {
      tree.children.push_back( toPartitionTree( child ) );
    }
  }
  return tree;
}

PartitionTree labelPartition( const LumaBlock& block, QpConfig qp )
{
  if( !isDecisionSize( block.size ) )
  {
    throw ShapeError( "split labeling needs a 64/32/16 block, got " + std::to_string( block.size ) );
  }
  return toPartitionTree( rdQuadTreeSearch( block, qp ) );
}

std::vector<LabeledBlock>& LabeledCorpus::forSize( int size )
{
  switch( size )
  {
  case 64: return cu64;
  case 32: return cu32;
  case 16: return cu16;
  default: throw ShapeError( "no labels for size " + std::to_string( size ) );
  }
}

const std::vector<LabeledBlock>& LabeledCorpus::forSize( int size ) const
{
  return const_cast<LabeledCorpus*>( this )->forSize( size );
}

LabeledCorpus labelCorpus( std::span<const Frame> frames, QpConfig qp, int threads )
{
  checkQp( qp.qp );
  std::vector<LumaBlock> ctus;
  for( const auto& frame: frames )
  {
    auto blocks = tile( frame, kCtuSize );
    std::move( blocks.begin(), blocks.end(), std::back_inserter( ctus ) );
  }
  std::vector<LabeledCorpus> perCtu( ctus.size() );
  parallelFor( ctus.size(), threads, [&]( size_t i ) {
    appendLabels( rdQuadTreeSearch( ctus[i], qp ), perCtu[i], ctus[i] );
  } );

  LabeledCorpus corpus;
  for( auto& part: perCtu )
  {
    for( int size: { 64, 32, 16 } )
    {
      auto& src = part.forSize( size );
      std::move( src.begin(), src.end(), std::back_inserter( corpus.forSize( size ) ) );
    }
  }
  return corpus;
}

void writeDataset( std::ostream& out, const Dataset& dataset )
{
  using namespace detail;
  if( !isDecisionSize( dataset.cuSize ) )
  {
    throw ShapeError( "dataset CU size must be 64, 32 or 16" );
  }
  out.write( "CUPD", 4 );
  putLe<uint16_t>( out, kDatasetVersion );
  putLe<uint16_t>( out, static_cast<uint16_t>( dataset.cuSize ) );
  putLe<uint16_t>( out, static_cast<uint16_t>( dataset.qp ) );
  putLe<uint64_t>( out, dataset.records.size() );
  for( const auto& record: dataset.records )
  {
    if( record.block.size != dataset.cuSize )
    {
      throw ShapeError( "dataset record size differs from header size" );
    }
    out.put( static_cast<char>( record.splitFlag ? 1 : 0 ) );
    out.write( reinterpret_cast<const char*>( record.block.samples.data() ),
               static_cast<std::streamsize>( record.block.samples.size() ) );
  }
  if( !out )
  {
    throw FormatError( "dataset write failed" );
  }
}

void writeDataset( const std::filesystem::path& path, const Dataset& dataset )
{
  std::ofstream out( path, std::ios::binary );
  if( !out )
  {
    throw FormatError( "cannot write " + path.string() );
  }
  writeDataset( out, dataset );
}

Dataset readDataset( std::istream& in )
{
  using namespace detail;
  expectMagic( in, "CUPD" );
  const auto version = getLe<uint16_t>( in, "dataset version" );
  if( version != kDatasetVersion )
  {
    throw FormatError( "unsupported dataset version " + std::to_string( version ) );
  }
  Dataset dataset;
  dataset.cuSize   = getLe<uint16_t>( in, "dataset cu_size" );
  dataset.qp       = getLe<uint16_t>( in, "dataset qp" );
  const auto count = getLe<uint64_t>( in, "dataset count" );
  if( !isDecisionSize( dataset.cuSize ) )
  {
    throw FormatError( "dataset CU size must be 64, 32 or 16" );
  }
  const size_t area = static_cast<size_t>( dataset.cuSize ) * dataset.cuSize;
  for( uint64_t i = 0; i < count; i++ )
  {
    const int flag = in.get();
    if( flag == std::char_traits<char>::eof() )
    {
      throw FormatError( "truncated dataset record" );
    }
    if( flag > 1 )
    {
      throw FormatError( "split flag must be 0 or 1" );
    }
    std::vector<uint8_t> samples( area );
    if( !in.read( reinterpret_cast<char*>( samples.data() ), static_cast<std::streamsize>( area ) ) )
    {
      throw FormatError( "truncated dataset record" );
    }
    dataset.records.push_back( { makeBlock( dataset.cuSize, std::move( samples ) ), static_cast<uint8_t>( flag ) } );
  }
  return dataset;
}

Dataset readDataset( const std::filesystem::path& path )
{
  std::ifstream in( path, std::ios::binary );
  if( !in )
  {
    throw FormatError( "cannot open " + path.string() );
  }
  return readDataset( in );
}

} // namespace cupart
