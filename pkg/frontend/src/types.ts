// Mirrors of the stepping-service protocol payloads. The client renders
// these verbatim and never recomputes any semantics locally.

export type Direction = 'forward' | 'reverse' | 'both';

export interface TokenView {
  id: string;
  type: string;
  memory: { key: number; variable: string | null }[];
  value: number | null;
}

export interface PlaceView {
  tokens: TokenView[];
  bonds: string[][]; // pairs of token ids
}

export interface StateView {
  version: number;
  places: Record<string, PlaceView>;
  history: Record<string, number[]>;
  bondGraph: { a: string; b: string; place: string }[];
}

export interface ConditionView {
  text: string | null;
  holds: boolean;
  bindings: Record<string, string>;
}

export interface MoveView {
  index: number;
  direction: 'forward' | 'reverse';
  transition: string;
  key: number;
  assignment: Record<string, string>;
  condition: ConditionView;
}

export interface EnabledResponse {
  version: number;
  semantics: string;
  direction: Direction;
  moves: MoveView[];
}

export interface FireResponse {
  state: StateView;
  applied: MoveView;
  diff: Record<string, { before: string[]; after: string[] }>;
}

export interface SessionCreated {
  session: string;
  net: NetDoc;
  semantics: string;
  layout: Record<string, number[]>;
  state: StateView;
}

export interface LtsEdgeView {
  src: number;
  transition: string;
  key: number;
  direction: string;
  dst: number;
}

export interface LtsView {
  states: number;
  initial: number;
  current: number | null;
  truncated: boolean;
  edges: LtsEdgeView[];
}

// the relevant slice of a net file, for rendering the static structure
export interface ArcDoc {
  vars?: string[];
  tokens?: string[];
  bonds?: string[][];
  absent?: string[];
  absentBonds?: string[][];
}

export interface TransitionDoc {
  name: string;
  in: Record<string, ArcDoc>;
  out: Record<string, ArcDoc>;
  variables?: Record<string, string>;
  forwardCondition?: string;
  reverseCondition?: string;
}

export interface NetDoc {
  name: string;
  mode: string;
  defaultSemantics?: string;
  places: string[];
  transitions: TransitionDoc[];
  layout?: Record<string, number[]>;
  [extra: string]: unknown;
}
