import { Transport } from './api.js';
import {
  Direction,
  EnabledResponse,
  FireResponse,
  MoveView,
  NetDoc,
  SessionCreated,
  StateView,
} from './types.js';

export interface LogEntry {
  kind: 'fire' | 'undo';
  move?: MoveView;
  version: number;
}

/**
 * Holds one stepping session. All semantics come from the service: the
 * controller only ever offers moves that arrived through the last
 * `/enabled` response, fires them by index against the version it saw,
 * and records what happened.
 */
export class SessionController {
  private session = '';
  private enabled: EnabledResponse | null = null;
  net: NetDoc | null = null;
  semantics = '';
  layout: Record<string, number[]> = {};
  state: StateView | null = null;
  direction: Direction = 'both';
  log: LogEntry[] = [];
  lastDiff: FireResponse['diff'] | null = null;

  constructor(private transport: Transport) {}

  async start(net: NetDoc | null, semantics?: string): Promise<SessionCreated> {
    const created = await this.transport.createSession(net, semantics);
    this.session = created.session;
    this.net = created.net;
    this.semantics = created.semantics;
    this.layout = created.layout ?? {};
    this.state = created.state;
    this.log = [];
    await this.refreshEnabled();
    return created;
  }

  /** Re-fetch the enabled moves for the current direction filter. */
  async refreshEnabled(direction?: Direction): Promise<MoveView[]> {
    if (direction) this.direction = direction;
    this.enabled = await this.transport.getEnabled(this.session, this.direction);
    return this.moves();
  }

  /** The moves the UI may display: exactly the last /enabled payload. */
  moves(): MoveView[] {
    return this.enabled ? [...this.enabled.moves] : [];
  }

  get version(): number {
    return this.state ? this.state.version : -1;
  }

  isDeadlocked(): boolean {
    return this.enabled !== null
      && this.enabled.direction === 'both'
      && this.enabled.moves.length === 0;
  }

  /**
   * Fire the move at `index` within the currently displayed list. Rejects
   * indices outside that list before anything reaches the service, so the
   * client cannot act on a move it never displayed.
   */
  async fire(index: number): Promise<FireResponse> {
    if (!this.enabled || index < 0 || index >= this.enabled.moves.length) {
      throw new Error(`move ${index} is not in the displayed enabled list`);
    }
    const response = await this.transport.fire(this.session, {
      version: this.enabled.version,
      direction: this.enabled.direction,
      moveIndex: index,
    });
    this.log.push({ kind: 'fire', move: response.applied, version: this.enabled.version });
    this.state = response.state;
    this.lastDiff = response.diff;
    await this.refreshEnabled();
    return response;
  }

  async undo(): Promise<StateView> {
    const res = await this.transport.undo(this.session);
    this.log.push({ kind: 'undo', version: this.version });
    this.state = res.state;
    this.lastDiff = null;
    await this.refreshEnabled();
    return res.state;
  }

  async lts(maxStates = 200) {
    return this.transport.getLts(this.session, maxStates);
  }

  /** Live occurrences with their reversibility per the displayed moves. */
  timeline(): { transition: string; key: number; reversible: boolean; moveIndex: number | null }[] {
    if (!this.state) return [];
    const reverseMoves = new Map<string, number>();
    this.moves().forEach((m) => {
      if (m.direction === 'reverse') {
        reverseMoves.set(`${m.transition}:${m.key}`, m.index);
      }
    });
    const out: { transition: string; key: number; reversible: boolean; moveIndex: number | null }[] = [];
    for (const [transition, keys] of Object.entries(this.state.history)) {
      for (const key of keys) {
        const idx = reverseMoves.get(`${transition}:${key}`);
        out.push({
          transition,
          key,
          reversible: idx !== undefined,
          moveIndex: idx === undefined ? null : idx,
        });
      }
    }
    out.sort((a, b) => a.key - b.key);
    return out;
  }
}
