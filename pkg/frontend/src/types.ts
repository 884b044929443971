/** Wire types of the backend JSON API. */

export type ActivityKind = 'corrective' | 'perfective' | 'adaptive';

export const ACTIVITY_KINDS: ActivityKind[] = ['corrective', 'perfective', 'adaptive'];

export interface BucketDto {
  start: string; // ISO-8601 UTC
  width_days: number;
  corrective: number;
  perfective: number;
  adaptive: number;
}

export interface AnomalyDto {
  bucket_start: string;
  kind: 'peak' | 'deep';
  total: number;
  series_mean: number;
  series_stddev: number;
}

export interface ActivityResponse {
  buckets: BucketDto[];
  anomalies: AnomalyDto[];
}

export interface CommitDto {
  hash: string;
  message: string;
  author_name: string;
  author_email: string;
  timestamp: string;
  label: string;
}

export interface CommitsPage {
  items: CommitDto[];
  total_matches: number;
}

export interface ProjectDto {
  name: string;
  commit_count: number;
  first_commit: string;
  last_commit: string;
}

export interface DeveloperDto {
  name: string;
  email: string;
  commit_count: number;
}

export interface ProfileDto {
  total: number;
  proportions: Record<ActivityKind, number>;
  min_share_threshold: number;
  balanced: boolean;
}

export const DAY_SECONDS = 86400;

/** Epoch seconds of an API ISO timestamp. */
export function parseIso(iso: string): number {
  return Math.floor(Date.parse(iso) / 1000);
}

/** ISO date (YYYY-MM-DD) of epoch seconds, as shown in tooltips and tables. */
export function isoDate(epoch: number): string {
  return new Date(epoch * 1000).toISOString().slice(0, 10);
}

export function bucketTotal(b: BucketDto): number {
  return b.corrective + b.perfective + b.adaptive;
}
