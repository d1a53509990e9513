import { LtsView, MoveView, NetDoc, StateView } from './types.js';

// Pure view-model builders: geometry and display structures only, no
// semantics. Rendering code consumes these; tests drive them headlessly.

export interface NodeVM {
  id: string;
  kind: 'place' | 'transition';
  x: number;
  y: number;
  label: string;
}

export interface TokenVM {
  id: string;
  place: string;
  x: number;
  y: number;
  label: string;
  value: number | null;
}

export interface BondVM {
  a: string;
  b: string;
  place: string;
}

export interface ArcVM {
  from: string;
  to: string;
  label: string;
}

export interface NetVM {
  nodes: NodeVM[];
  arcs: ArcVM[];
  tokens: TokenVM[];
  bonds: BondVM[];
}

const WIDTH = 760;
const HEIGHT = 480;

/** Fixed user-authored coordinates when present, a deterministic circular
 * fallback otherwise. */
export function layoutPositions(
  net: NetDoc,
  layout: Record<string, number[]>,
): Map<string, { x: number; y: number }> {
  const names: string[] = [
    ...net.places,
    ...net.transitions.map((t) => t.name),
  ];
  const positions = new Map<string, { x: number; y: number }>();
  const missing: string[] = [];
  for (const name of names) {
    const fixed = layout[name] ?? net.layout?.[name];
    if (fixed && fixed.length === 2) {
      positions.set(name, { x: fixed[0], y: fixed[1] });
    } else {
      missing.push(name);
    }
  }
  missing.forEach((name, i) => {
    const angle = (2 * Math.PI * i) / Math.max(missing.length, 1);
    positions.set(name, {
      x: Math.round(WIDTH / 2 + (WIDTH / 2 - 80) * Math.cos(angle)),
      y: Math.round(HEIGHT / 2 + (HEIGHT / 2 - 60) * Math.sin(angle)),
    });
  });
  return positions;
}

function arcLabel(doc: { vars?: string[]; tokens?: string[]; bonds?: string[][]; absent?: string[] }): string {
  const parts: string[] = [...(doc.vars ?? doc.tokens ?? [])];
  for (const [a, b] of doc.bonds ?? []) parts.push(`${a}-${b}`);
  for (const t of doc.absent ?? []) parts.push(`!${t}`);
  return parts.join(',');
}

export function buildNetView(
  net: NetDoc,
  state: StateView,
  layout: Record<string, number[]> = {},
): NetVM {
  const positions = layoutPositions(net, layout);
  const nodes: NodeVM[] = [];
  for (const place of net.places) {
    const p = positions.get(place)!;
    nodes.push({ id: place, kind: 'place', x: p.x, y: p.y, label: place });
  }
  for (const t of net.transitions) {
    const p = positions.get(t.name)!;
    nodes.push({ id: t.name, kind: 'transition', x: p.x, y: p.y, label: t.name });
  }
  const arcs: ArcVM[] = [];
  for (const t of net.transitions) {
    for (const [place, doc] of Object.entries(t.in)) {
      arcs.push({ from: place, to: t.name, label: arcLabel(doc) });
    }
    for (const [place, doc] of Object.entries(t.out)) {
      arcs.push({ from: t.name, to: place, label: arcLabel(doc) });
    }
  }
  const tokens: TokenVM[] = [];
  const bonds: BondVM[] = [];
  for (const [place, content] of Object.entries(state.places)) {
    const center = positions.get(place);
    if (!center) continue;
    content.tokens.forEach((tok, i) => {
      const angle = (2 * Math.PI * i) / Math.max(content.tokens.length, 1);
      tokens.push({
        id: tok.id,
        place,
        x: Math.round(center.x + 18 * Math.cos(angle)),
        y: Math.round(center.y + 18 * Math.sin(angle)),
        label: tok.value === null ? tok.id : `${tok.id}[${tok.value}]`,
        value: tok.value,
      });
    });
    for (const [a, b] of content.bonds) {
      bonds.push({ a, b, place });
    }
  }
  return { nodes, arcs, tokens, bonds };
}

export interface MoveRowVM {
  index: number;
  label: string;
  conditionText: string | null;
  bindings: string;
}

/** Rows for the move-picking modal: transition x assignment with the
 * condition outcome the service reported. */
export function buildMoveRows(moves: MoveView[]): MoveRowVM[] {
  return moves.map((m) => {
    const assignment = Object.entries(m.assignment)
      .map(([v, tok]) => `${v}=${tok}`)
      .join(', ');
    const arrow = m.direction === 'forward' ? '→' : '⇐';
    return {
      index: m.index,
      label: `${arrow} ${m.transition}${m.direction === 'reverse' ? `:${m.key}` : ''}`,
      conditionText: m.condition.text,
      bindings: assignment,
    };
  });
}

export interface LtsVM {
  nodes: { id: number; x: number; y: number; current: boolean; initial: boolean }[];
  edges: { src: number; dst: number; label: string; reverse: boolean }[];
  truncated: boolean;
}

/** Small-graph overview: states layered by distance from the initial one. */
export function buildLtsView(lts: LtsView, width = 360, height = 240): LtsVM {
  const adjacency = new Map<number, number[]>();
  lts.edges.forEach((e) => {
    if (!adjacency.has(e.src)) adjacency.set(e.src, []);
    adjacency.get(e.src)!.push(e.dst);
  });
  const depth = new Map<number, number>();
  depth.set(lts.initial, 0);
  const queue = [lts.initial];
  while (queue.length) {
    const node = queue.shift()!;
    for (const next of adjacency.get(node) ?? []) {
      if (!depth.has(next)) {
        depth.set(next, depth.get(node)! + 1);
        queue.push(next);
      }
    }
  }
  const byDepth = new Map<number, number[]>();
  for (let id = 0; id < lts.states; id += 1) {
    const d = depth.get(id) ?? 0;
    if (!byDepth.has(d)) byDepth.set(d, []);
    byDepth.get(d)!.push(id);
  }
  const maxDepth = Math.max(...byDepth.keys(), 0);
  const nodes: LtsVM['nodes'] = [];
  for (const [d, ids] of byDepth) {
    ids.forEach((id, i) => {
      nodes.push({
        id,
        x: Math.round(40 + (d * (width - 80)) / Math.max(maxDepth, 1)),
        y: Math.round(((i + 1) * height) / (ids.length + 1)),
        current: id === lts.current,
        initial: id === lts.initial,
      });
    });
  }
  nodes.sort((a, b) => a.id - b.id);
  return {
    nodes,
    edges: lts.edges.map((e) => ({
      src: e.src,
      dst: e.dst,
      label: `${e.transition}:${e.key}`,
      reverse: e.direction !== 'forward',
    })),
    truncated: lts.truncated,
  };
}
