/** API client: one interface, an HTTP implementation, and shared query shapes. */

import type {
  ActivityKind,
  ActivityResponse,
  CommitsPage,
  DeveloperDto,
  ProfileDto,
  ProjectDto,
} from './types.js';

export type MatchMode = 'name' | 'email' | 'both';

export interface IdentityQuery {
  dev_name?: string;
  dev_email?: string;
  match_mode?: MatchMode;
}

export interface ActivityQuery extends IdentityQuery {
  project: string;
  width_days?: number;
  from?: number;
  to?: number;
}

export interface CommitsQuery extends IdentityQuery {
  project: string;
  activity: ActivityKind;
  bucket_start: number;
  width_days: number;
  q?: string;
  limit?: number;
  offset?: number;
}

export interface ApiClient {
  projects(): Promise<ProjectDto[]>;
  activity(query: ActivityQuery, signal?: AbortSignal): Promise<ActivityResponse>;
  commits(query: CommitsQuery): Promise<CommitsPage>;
  developers(project: string): Promise<DeveloperDto[]>;
  profile(query: ActivityQuery & { threshold?: number }): Promise<ProfileDto>;
  /** Raw CSV body of the export endpoint. */
  exportCsv(project?: string): Promise<string>;
  /** URL of the export endpoint, for pass-through download links. */
  exportUrl(project?: string): string;
}

function toSearch(params: Record<string, unknown>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined && value !== null && value !== '') {
      search.set(key, String(value));
    }
  }
  const text = search.toString();
  return text ? `?${text}` : '';
}

export class ApiHttpError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly base = '/api') {}

  private async getJson<T>(path: string, params: Record<string, unknown>, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(`${this.base}${path}${toSearch(params)}`, { signal });
    if (!resp.ok) {
      let code = 'internal';
      let message = resp.statusText;
      try {
        const body = await resp.json();
        code = body.code ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiHttpError(resp.status, code, message);
    }
    return resp.json() as Promise<T>;
  }

  projects(): Promise<ProjectDto[]> {
    return this.getJson('/projects', {});
  }

  activity(query: ActivityQuery, signal?: AbortSignal): Promise<ActivityResponse> {
    return this.getJson('/activity', { ...query }, signal);
  }

  commits(query: CommitsQuery): Promise<CommitsPage> {
    return this.getJson('/commits', { ...query });
  }

  developers(project: string): Promise<DeveloperDto[]> {
    return this.getJson('/developers', { project });
  }

  profile(query: ActivityQuery & { threshold?: number }): Promise<ProfileDto> {
    return this.getJson('/profile', { ...query });
  }

  async exportCsv(project?: string): Promise<string> {
    const resp = await fetch(this.exportUrl(project));
    if (!resp.ok) {
      throw new ApiHttpError(resp.status, 'internal', resp.statusText);
    }
    return resp.text();
  }

  exportUrl(project?: string): string {
    return `${this.base}/export${toSearch({ project })}`;
  }
}
