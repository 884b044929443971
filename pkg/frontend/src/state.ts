/** View state and its bijective mapping onto the URL query string. */

import type { MatchMode } from './api.js';
import { DAY_SECONDS, type ActivityKind } from './types.js';

export const WIDTH_DEFAULT = 28;
export const WIDTH_MIN = 1;
export const WIDTH_MAX = 365;
export const DETAILS_LIMIT_DEFAULT = 10;

export type ViewKind = 'project' | 'developer';

export interface Period {
  start: number; // epoch seconds, inclusive
  end: number; // exclusive
}

export interface Identity {
  name?: string;
  email?: string;
  mode: MatchMode;
}

export interface DetailsState {
  activity: ActivityKind;
  bucketStart: number;
  query?: string;
  limit: number;
  offset: number;
}

export interface ViewState {
  project: string;
  view: ViewKind;
  identity?: Identity;
  period?: Period;
  widthDays: number;
  zoom?: Period;
  details?: DetailsState;
}

export function initialState(project: string): ViewState {
  return { project, view: 'project', widthDays: WIDTH_DEFAULT };
}

export function clampWidth(width: number): number {
  if (!Number.isFinite(width)) return WIDTH_DEFAULT;
  return Math.min(WIDTH_MAX, Math.max(WIDTH_MIN, Math.round(width)));
}

/** Both zoom edges sit on bucket boundaries for this width and origin. */
export function zoomAlignable(zoom: Period, widthDays: number, origin: number): boolean {
  const width = widthDays * DAY_SECONDS;
  return (zoom.start - origin) % width === 0 && (zoom.end - origin) % width === 0;
}

/**
 * Slider rule: a new width keeps the zoom only when the zoom edges remain
 * bucket-alignable against the series origin; otherwise the zoom is cleared.
 */
export function setWidthDays(state: ViewState, width: number, origin: number): ViewState {
  const widthDays = clampWidth(width);
  const next: ViewState = { ...state, widthDays };
  if (state.zoom && !zoomAlignable(state.zoom, widthDays, origin)) {
    delete next.zoom;
  }
  return next;
}

/** The time filter a series request should carry: zoom wins over period. */
export function effectiveRange(state: ViewState): Period | undefined {
  return state.zoom ?? state.period;
}

const ACTIVITIES: ActivityKind[] = ['corrective', 'perfective', 'adaptive'];
const MODES: MatchMode[] = ['name', 'email', 'both'];

/**
 * Canonical encoding: fields at their defaults are omitted, so each valid
 * state has exactly one query string and decode(encode(s)) === s.
 */
export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set('project', state.project);
  if (state.view === 'developer') params.set('view', 'developer');
  if (state.identity) {
    if (state.identity.name) params.set('dev_name', state.identity.name);
    if (state.identity.email) params.set('dev_email', state.identity.email);
    params.set('match_mode', state.identity.mode);
  }
  if (state.period) {
    params.set('from', String(state.period.start));
    params.set('to', String(state.period.end));
  }
  if (state.widthDays !== WIDTH_DEFAULT) params.set('width', String(state.widthDays));
  if (state.zoom) {
    params.set('zfrom', String(state.zoom.start));
    params.set('zto', String(state.zoom.end));
  }
  if (state.details) {
    params.set('d_activity', state.details.activity);
    params.set('d_bucket', String(state.details.bucketStart));
    if (state.details.query) params.set('d_q', state.details.query);
    if (state.details.limit !== DETAILS_LIMIT_DEFAULT) {
      params.set('d_limit', String(state.details.limit));
    }
    if (state.details.offset !== 0) params.set('d_offset', String(state.details.offset));
  }
  return params.toString();
}

function intOrUndefined(text: string | null): number | undefined {
  if (text === null) return undefined;
  const value = Number.parseInt(text, 10);
  return Number.isFinite(value) ? value : undefined;
}

export function decodeState(query: string): ViewState | null {
  const params = new URLSearchParams(query);
  const project = params.get('project');
  if (!project) return null;

  const state = initialState(project);

  const mode = params.get('match_mode');
  const name = params.get('dev_name') ?? undefined;
  const email = params.get('dev_email') ?? undefined;
  if (mode && MODES.includes(mode as MatchMode) && (name || email)) {
    state.identity = { name, email, mode: mode as MatchMode };
  }
  if (params.get('view') === 'developer' && state.identity) {
    state.view = 'developer';
  }

  const from = intOrUndefined(params.get('from'));
  const to = intOrUndefined(params.get('to'));
  if (from !== undefined && to !== undefined && from < to) {
    state.period = { start: from, end: to };
  }

  const width = intOrUndefined(params.get('width'));
  if (width !== undefined) state.widthDays = clampWidth(width);

  const zfrom = intOrUndefined(params.get('zfrom'));
  const zto = intOrUndefined(params.get('zto'));
  if (zfrom !== undefined && zto !== undefined && zfrom < zto) {
    state.zoom = { start: zfrom, end: zto };
  }

  const activity = params.get('d_activity');
  const bucket = intOrUndefined(params.get('d_bucket'));
  if (activity && ACTIVITIES.includes(activity as ActivityKind) && bucket !== undefined) {
    state.details = {
      activity: activity as ActivityKind,
      bucketStart: bucket,
      query: params.get('d_q') ?? undefined,
      limit: intOrUndefined(params.get('d_limit')) ?? DETAILS_LIMIT_DEFAULT,
      offset: intOrUndefined(params.get('d_offset')) ?? 0,
    };
  }
  return state;
}
