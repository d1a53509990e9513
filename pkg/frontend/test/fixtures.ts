import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';

import { Transport } from '../src/api.js';
import {
  Direction,
  EnabledResponse,
  FireResponse,
  LtsView,
  MoveView,
  NetDoc,
  SessionCreated,
  StateView,
} from '../src/types.js';

const HERE = dirname(fileURLToPath(import.meta.url));

export interface ReplayStep {
  direction: Direction;
  enabled: EnabledResponse;
  pick: number;
  fire: FireResponse;
}

export interface ReplayFixture {
  net: NetDoc;
  created: SessionCreated;
  steps: ReplayStep[];
  finalEnabled: EnabledResponse;
  lts: LtsView;
}

export function loadFixture(name: string): ReplayFixture {
  const raw = readFileSync(join(HERE, '..', 'fixtures', name), 'utf8');
  return JSON.parse(raw) as ReplayFixture;
}

/**
 * A transport that replays a recorded session verbatim. Any request the
 * recorded session did not make (wrong order, wrong index, extra call)
 * throws, so tests prove the client walks exactly the recorded protocol.
 */
export class FixtureTransport implements Transport {
  private cursor = 0;
  fired: MoveView[] = [];

  constructor(private fixture: ReplayFixture) {}

  async createSession(): Promise<SessionCreated> {
    return this.fixture.created;
  }

  async getState(): Promise<StateView> {
    if (this.cursor === 0) return this.fixture.created.state;
    return this.fixture.steps[this.cursor - 1].fire.state;
  }

  async getEnabled(_session: string, direction: Direction): Promise<EnabledResponse> {
    const step = this.fixture.steps[this.cursor];
    if (step && step.direction === direction) {
      return step.enabled;
    }
    if (this.fixture.finalEnabled.direction === direction || direction === 'both') {
      // out of recorded firing steps: the session's closing enabled view
      if (this.cursor >= this.fixture.steps.length) return this.fixture.finalEnabled;
    }
    // a direction the recording did not use at this point: empty but honest
    return {
      version: this.versionNow(),
      semantics: this.fixture.created.semantics,
      direction,
      moves: [],
    };
  }

  private versionNow(): number {
    return this.cursor === 0
      ? this.fixture.created.state.version
      : this.fixture.steps[this.cursor - 1].fire.state.version;
  }

  async fire(
    _session: string,
    body: { version: number; direction: Direction; moveIndex: number },
  ): Promise<FireResponse> {
    const step = this.fixture.steps[this.cursor];
    if (!step) throw new Error('fire beyond the recorded session');
    if (body.moveIndex !== step.pick || body.direction !== step.direction) {
      throw new Error(
        `recorded pick was ${step.direction}#${step.pick}, got ${body.direction}#${body.moveIndex}`,
      );
    }
    if (body.version !== step.enabled.version) {
      throw new Error('stale move: version mismatch against the recording');
    }
    this.fired.push(step.fire.applied);
    this.cursor += 1;
    return step.fire;
  }

  async undo(): Promise<{ state: StateView }> {
    throw new Error('the recorded sessions contain no undo');
  }

  async getLts(): Promise<LtsView> {
    return this.fixture.lts;
  }
}
